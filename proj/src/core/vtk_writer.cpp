// Copyright 2026 The chhs Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/vtk_writer.hpp"

#include <cstdio>
#include <memory>

#include "core/errors.hpp"
#include "core/level_set.hpp"

namespace chhs {

std::vector<std::array<double, 2>> nodal_velocity(const FormAssembler& assembler, const SpaceOperators& ops,
                                                  const QpVectorField& u) {
  const std::size_t n = assembler.space().n_dofs();
  std::vector<std::array<double, 2>> out(n);
  QpField comp{u.points_per_element, std::vector<double>(u.values.size())};
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < u.values.size(); ++k) comp.values[k] = u.values[k][c];
    const std::vector<double> b = assembler.value_load(comp);
    const CgResult r = cg_solve(ops.mass, b, 1e-12, 10000, false);
    if (!r.report.converged) throw SolverError("mass-matrix solve for the nodal velocity did not converge");
    for (std::size_t i = 0; i < n; ++i) out[i][c] = r.x[i];
  }
  return out;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

void write_scalars(std::FILE* f, const char* name, const FieldVector& u) {
  std::fprintf(f, "SCALARS %s double 1\nLOOKUP_TABLE default\n", name);
  for (std::size_t i = 0; i < u.size(); ++i) std::fprintf(f, "%.17g\n", u[i]);
}

}  // namespace

void write_fields(const std::string& path, const State& state, const std::vector<std::array<double, 2>>* velocity) {
  const FeSpace& space = state.phi.space();
  const auto tris = dof_triangles(space);
  const auto& coords = space.dof_coords();
  if (velocity && velocity->size() != coords.size()) throw ConfigError("velocity size does not match the space");

  std::unique_ptr<std::FILE, FileCloser> file(std::fopen(path.c_str(), "w"));
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  std::FILE* f = file.get();
  std::fprintf(f, "# vtk DataFile Version 3.0\nchhs step %d time %.17g\nASCII\nDATASET UNSTRUCTURED_GRID\n", state.step,
               state.time);
  std::fprintf(f, "POINTS %zu double\n", coords.size());
  for (const auto& p : coords) std::fprintf(f, "%.17g %.17g 0\n", p.x, p.y);
  std::fprintf(f, "CELLS %zu %zu\n", tris.size(), 4 * tris.size());
  for (const auto& t : tris) std::fprintf(f, "3 %d %d %d\n", t[0], t[1], t[2]);
  std::fprintf(f, "CELL_TYPES %zu\n", tris.size());
  for (std::size_t t = 0; t < tris.size(); ++t) std::fputs("5\n", f);

  std::fprintf(f, "POINT_DATA %zu\n", coords.size());
  write_scalars(f, "phi", state.phi);
  write_scalars(f, "mu", state.mu);
  write_scalars(f, "p", state.p);
  if (velocity) {
    std::fputs("VECTORS velocity double\n", f);
    for (const auto& v : *velocity) std::fprintf(f, "%.17g %.17g 0\n", v[0], v[1]);
  }
  if (std::ferror(f)) throw IoError("write to '" + path + "' failed");
  if (std::fclose(file.release()) != 0) throw IoError("closing '" + path + "' failed");
}

}  // namespace chhs
