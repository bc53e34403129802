#pragma once

#include "qhi/errors.hpp"
#include "qhi/precision.hpp"
#include "qhi/complex.hpp"
#include "qhi/dilog.hpp"
#include "qhi/quadrature.hpp"
#include "qhi/faddeev.hpp"
#include "qhi/gluing.hpp"
#include "qhi/contour.hpp"
#include "qhi/statesum.hpp"
#include "qhi/asymptotics.hpp"
#include "qhi/io.hpp"
#include "qhi/checks.hpp"
