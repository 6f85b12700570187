#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cholesteric/kernels.hpp"

namespace chol {

struct KernelConfig {
  KernelSet kernels;
  std::optional<double> rho0;  // from the optional "model" block
};

/// Parses the kernel JSON format. Throws ConfigError naming the offending key
/// (dotted path such as "cH.f1.width") on malformed or unknown entries.
KernelConfig parse_kernel_config(std::string_view text);
KernelConfig load_kernel_config(const std::string& path);

std::string kernel_config_json(const KernelSet& ks, std::optional<double> rho0 = std::nullopt);

}  // namespace chol
