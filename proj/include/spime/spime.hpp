#pragma once

#include "spime/aes_core.hpp"
#include "spime/aes_primitives.hpp"
#include "spime/block.hpp"
#include "spime/error.hpp"
#include "spime/perf_model.hpp"
#include "spime/pim_controller.hpp"
#include "spime/spime_array.hpp"
