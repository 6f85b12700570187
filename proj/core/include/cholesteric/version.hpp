#pragma once

namespace chol {

/// Library version, "major.minor.patch".
const char* version();

}  // namespace chol
