#pragma once

#include <string>

#include "helmpinn/network.hpp"

namespace helmpinn {

/// Binary parameter checkpoint. The header records the architecture hash,
/// the init seed, and the layer layout; loading verifies the hash against
/// the expected spec and rejects stale files.
void save_checkpoint(const std::string& path, const ParameterVector& params,
                     const NetworkSpec& spec);

ParameterVector load_checkpoint(const std::string& path,
                                const NetworkSpec& expected_spec);

} // namespace helmpinn
