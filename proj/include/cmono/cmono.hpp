#ifndef CMONO_CMONO_HPP
#define CMONO_CMONO_HPP

#include "cmono/cmcheck.hpp"
#include "cmono/errors.hpp"
#include "cmono/exact.hpp"
#include "cmono/laplace.hpp"
#include "cmono/measure_io.hpp"
#include "cmono/moments.hpp"
#include "cmono/quadrature.hpp"
#include "cmono/specfun.hpp"

#endif  // CMONO_CMONO_HPP
