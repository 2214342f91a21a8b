#include <cmath>
#include <numbers>
#include <ostream>

#include "fbmin/cli.hpp"
#include "fbmin/errors.hpp"

namespace fbmin::cli {

Mesh revolve(const std::vector<std::pair<double, double>>& profile_xt, int angles) {
  if (profile_xt.size() < 2) throw DomainError("mesh needs a profile with at least 2 samples");
  if (angles < 8) throw DomainError("mesh needs at least 8 angles");
  Mesh mesh;
  mesh.vertices.reserve(profile_xt.size() * static_cast<std::size_t>(angles));
  for (const auto& [x, t] : profile_xt) {
    for (int j = 0; j < angles; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / angles;
      mesh.vertices.push_back({x * std::cos(theta), x * std::sin(theta), t});
    }
  }
  // Faces carry the normal X_theta x X_s (s along the profile), which points
  // away from the axis wherever t increases along the profile. Quads
  // (i, j) -> (i, j+1) -> (i+1, j+1) -> (i+1, j) follow that orientation.
  const int rows = static_cast<int>(profile_xt.size());
  for (int i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j < angles; ++j) {
      const int jn = (j + 1) % angles;  // seam shares the first column
      const int a = i * angles + j;
      const int b = i * angles + jn;
      const int c = (i + 1) * angles + jn;
      const int d = (i + 1) * angles + j;
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  return mesh;
}

void write_obj(std::ostream& os, const Mesh& mesh) {
  for (const auto& v : mesh.vertices) {
    os << "v " << format_number(v[0]) << ' ' << format_number(v[1]) << ' ' << format_number(v[2])
       << '\n';
  }
  for (const auto& f : mesh.faces) {
    os << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
}

}  // namespace fbmin::cli
