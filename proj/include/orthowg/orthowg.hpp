#ifndef ORTHOWG_ORTHOWG_HPP
#define ORTHOWG_ORTHOWG_HPP

#include "orthowg/brute_force.hpp"
#include "orthowg/error.hpp"
#include "orthowg/expansion.hpp"
#include "orthowg/expression.hpp"
#include "orthowg/io.hpp"
#include "orthowg/matrix.hpp"
#include "orthowg/montecarlo.hpp"
#include "orthowg/noncross.hpp"
#include "orthowg/permap.hpp"
#include "orthowg/polynomial.hpp"
#include "orthowg/random.hpp"
#include "orthowg/setpart.hpp"
#include "orthowg/verify.hpp"
#include "orthowg/weingarten.hpp"

#endif  // ORTHOWG_ORTHOWG_HPP
