#include <stdexcept>

#include "ddlqr/kernels.hpp"

namespace ddlqr::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::scalar};
  if (detail::avx2_table() != nullptr) out.push_back(Isa::avx2);
  if (detail::neon_table() != nullptr) out.push_back(Isa::neon);
  return out;
}

const KernelTable& table(Isa isa) {
  const KernelTable* t = nullptr;
  switch (isa) {
    case Isa::scalar: t = detail::scalar_table(); break;
    case Isa::avx2: t = detail::avx2_table(); break;
    case Isa::neon: t = detail::neon_table(); break;
  }
  if (t == nullptr) throw std::invalid_argument("kernel variant not available: " + std::string(to_string(isa)));
  return *t;
}

const KernelTable& active() {
  static const KernelTable& chosen = table(available_isas().back());
  return chosen;
}

}  // namespace ddlqr::kernels
