#pragma once

// Umbrella header: the whole library.

#include "des/alphabet.hpp"
#include "des/coordination.hpp"
#include "des/errors.hpp"
#include "des/generator.hpp"
#include "des/io.hpp"
#include "des/ops.hpp"
#include "des/properties.hpp"
#include "des/synthesis.hpp"
