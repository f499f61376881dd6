#pragma once

/// @file version.hpp
/// @brief Tool version string recorded in run manifests.

namespace hiam {

inline constexpr const char* version_string = "hiam 1.0.0";

}  // namespace hiam
