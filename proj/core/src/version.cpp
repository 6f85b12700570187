#include "cholesteric/version.hpp"

namespace chol {

const char* version() { return CHOLESTERIC_VERSION; }

}  // namespace chol
