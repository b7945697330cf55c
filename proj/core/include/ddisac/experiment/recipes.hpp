#pragma once

#include <string>
#include <vector>

#include "ddisac/experiment/config.hpp"

namespace ddisac::experiment {

// Built-in desk-scale configurations reproducing the reference figures.
std::vector<std::string> list_recipes();

ExperimentConfig recipe(const std::string& name);

}  // namespace ddisac::experiment
