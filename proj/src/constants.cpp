#include "chernlab/constants.hpp"

#include <cstdio>
#include <sstream>

namespace chernlab::constants {

std::string table_text() {
  std::ostringstream s;
  char buf[64];
  auto num = [&](const char* key, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    s << key << '=' << buf << '\n';
  };
  s << "omega=sum h_ij dz_i^dzbar_j\n";
  s << "vol=i^n omega^n/n!\n";
  s << "dV=det(h)*lebesgue\n";
  s << "inner=unitary-coframe-orthonormal\n";
  s << "star=a^*conj(b)=(a,b)vol\n";
  num("codifferential_sign", kCodifferentialSign);
  num("c1_scale", kChernClass1Scale);
  num("c2_scale", kChernClass2Scale);
  num("tol_symbolic", kTolSymbolic);
  num("tol_fd", kTolFiniteDifference);
  num("quadrature_sigmas", kQuadratureSigmas);
  num("tol_pd", kTolPositiveDefinite);
  num("singularity_margin", kSingularityMargin);
  return s.str();
}

std::string table_hash() {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : table_text()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chernlab::constants
