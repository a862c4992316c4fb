#pragma once

#include "tomo/analytic_states.hpp"
#include "tomo/core.hpp"
#include "tomo/cv_transforms.hpp"
#include "tomo/evolution.hpp"
#include "tomo/io.hpp"
#include "tomo/spin.hpp"
#include "tomo/statistics.hpp"
