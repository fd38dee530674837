#pragma once

#include "aperture.hpp"
#include "correlator.hpp"
#include "errors.hpp"
#include "gain.hpp"
#include "observables.hpp"
#include "params.hpp"
#include "quadrature.hpp"
