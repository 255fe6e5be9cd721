#pragma once

#include "appendix_oracles.hpp"
#include "closed_form_bounds.hpp"
#include "field_io.hpp"
#include "mc_estimator.hpp"
#include "parallel.hpp"
#include "philox.hpp"
#include "ssf_channel.hpp"
#include "sweep.hpp"
#include "sweep_result.hpp"
#include "unitary_dft.hpp"
#include "units.hpp"
