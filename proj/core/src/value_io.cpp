#include <cstring>
#include <fstream>

#include "rfplan/reachability.hpp"

namespace rfplan {

namespace {

constexpr char kMagic[8] = {'R', 'F', 'P', 'L', 'T', 'E', 'B', '1'};

void write_u64(std::ostream& os, std::uint64_t v) {
  char buf[8];
  std::memcpy(buf, &v, 8);  // little-endian hosts only
  os.write(buf, 8);
}

void write_f64(std::ostream& os, double v) {
  char buf[8];
  std::memcpy(buf, &v, 8);
  os.write(buf, 8);
}

bool read_u64(std::istream& is, std::uint64_t* v) {
  char buf[8];
  if (!is.read(buf, 8)) return false;
  std::memcpy(v, buf, 8);
  return true;
}

bool read_f64(std::istream& is, double* v) {
  char buf[8];
  if (!is.read(buf, 8)) return false;
  std::memcpy(v, buf, 8);
  return true;
}

template <int N>
void write_field(std::ostream& os, const GridField<N>& field) {
  write_u64(os, N);
  for (const AxisSpec& a : field.spec.axes) {
    write_f64(os, a.lo);
    write_f64(os, a.hi);
    write_u64(os, static_cast<std::uint64_t>(a.count));
    write_u64(os, a.periodic ? 1 : 0);
  }
  write_u64(os, field.values.size());
  for (double v : field.values) write_f64(os, v);
}

template <int N>
bool read_field(std::istream& is, GridField<N>* field) {
  std::uint64_t n_axes = 0;
  if (!read_u64(is, &n_axes) || n_axes != static_cast<std::uint64_t>(N)) return false;
  for (AxisSpec& a : field->spec.axes) {
    std::uint64_t count = 0, periodic = 0;
    if (!read_f64(is, &a.lo) || !read_f64(is, &a.hi) || !read_u64(is, &count) ||
        !read_u64(is, &periodic)) {
      return false;
    }
    a.count = static_cast<int>(count);
    a.periodic = periodic != 0;
  }
  std::uint64_t size = 0;
  if (!read_u64(is, &size) || size != field->spec.size()) return false;
  field->values.resize(size);
  for (double& v : field->values) {
    if (!read_f64(is, &v)) return false;
  }
  return true;
}

}  // namespace

void save_teb_artifact(const TebArtifact& artifact, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_teb_artifact: cannot open " + path);
  os.write(kMagic, 8);
  write_u64(os, artifact.param_hash);

  write_field(os, artifact.grid.field);
  write_f64(os, artifact.grid.converged_residual);
  write_u64(os, static_cast<std::uint64_t>(artifact.grid.sweeps));
  write_f64(os, artifact.grid.value_cap);
  write_f64(os, artifact.grid.d_epsilon);
  write_u64(os, static_cast<std::uint64_t>(artifact.grid.form));

  write_field(os, artifact.zgrid.field);
  write_f64(os, artifact.zgrid.converged_residual);
  write_u64(os, static_cast<std::uint64_t>(artifact.zgrid.sweeps));
  write_f64(os, artifact.zgrid.value_cap);

  write_f64(os, artifact.bound.radius);
  write_f64(os, artifact.bound.z_extent);
  write_f64(os, artifact.bound.level);
  write_f64(os, artifact.z_level);
  write_f64(os, artifact.kappa_planar);
  write_f64(os, artifact.kappa_z);
  if (!os) throw std::runtime_error("save_teb_artifact: write failed for " + path);
}

std::optional<TebArtifact> load_teb_artifact(const std::string& path,
                                             std::uint64_t expected_hash) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) return std::nullopt;
  std::uint64_t hash = 0;
  if (!read_u64(is, &hash) || hash != expected_hash) return std::nullopt;

  TebArtifact art;
  art.param_hash = hash;

  std::uint64_t sweeps = 0, form = 0;
  if (!read_field(is, &art.grid.field)) return std::nullopt;
  if (!read_f64(is, &art.grid.converged_residual)) return std::nullopt;
  if (!read_u64(is, &sweeps)) return std::nullopt;
  art.grid.sweeps = static_cast<int>(sweeps);
  if (!read_f64(is, &art.grid.value_cap)) return std::nullopt;
  if (!read_f64(is, &art.grid.d_epsilon)) return std::nullopt;
  if (!read_u64(is, &form)) return std::nullopt;
  art.grid.form = static_cast<RelativeDynamicsForm>(form);

  if (!read_field(is, &art.zgrid.field)) return std::nullopt;
  if (!read_f64(is, &art.zgrid.converged_residual)) return std::nullopt;
  if (!read_u64(is, &sweeps)) return std::nullopt;
  art.zgrid.sweeps = static_cast<int>(sweeps);
  if (!read_f64(is, &art.zgrid.value_cap)) return std::nullopt;

  if (!read_f64(is, &art.bound.radius)) return std::nullopt;
  if (!read_f64(is, &art.bound.z_extent)) return std::nullopt;
  if (!read_f64(is, &art.bound.level)) return std::nullopt;
  if (!read_f64(is, &art.z_level)) return std::nullopt;
  if (!read_f64(is, &art.kappa_planar)) return std::nullopt;
  if (!read_f64(is, &art.kappa_z)) return std::nullopt;
  return art;
}

}  // namespace rfplan
