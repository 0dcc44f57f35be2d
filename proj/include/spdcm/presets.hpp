#pragma once

#include <string>
#include <vector>

namespace spdcm {

/// Names of the built-in configurations (fig2, fig4, fig5).
std::vector<std::string> preset_names();

/// Config text of a preset; throws ValidationError for an unknown name.
std::string preset_text(const std::string& name);

}  // namespace spdcm
