#pragma once

#include "qprism/error.hpp"
#include "qprism/modular.hpp"
#include "qprism/mpoly.hpp"
#include "qprism/base_ring.hpp"
#include "qprism/homology.hpp"
#include "qprism/twisted_calculus.hpp"
#include "qprism/delta_ring.hpp"
#include "qprism/divided_poly.hpp"
#include "qprism/cartier.hpp"
#include "qprism/adic.hpp"
#include "qprism/axioms.hpp"
