#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "axisym/continuation.hpp"

namespace axisym {

// ---------------------------------------------------------------------------
// Binary snapshot
//
// Layout (all little-endian):
//   char[8]  magic "AXSNAP01"
//   u32      format version
//   u32      reserved (0)
//   f64      R, a, nu
//   u64      Nr, Nz
//   f64      t
//   f64[Nr*Nz] v_r, v_phi, v_z, p, each row-major (index j * Nz + k)

inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr char snapshot_magic[8] = {'A', 'X', 'S', 'N', 'A', 'P', '0', '1'};

struct Snapshot {
  CylinderDomain domain;
  int nr = 0;
  int nz = 0;
  std::uint32_t version = snapshot_version;
  VelocityField state;
};

namespace detail {

inline void put_u64(std::ostream& os, std::uint64_t x) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xffu);
  os.write(b, 8);
}

inline void put_u32(std::ostream& os, std::uint32_t x) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xffu);
  os.write(b, 4);
}

inline void put_f64(std::ostream& os, double x) { put_u64(os, std::bit_cast<std::uint64_t>(x)); }

inline std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  if (!is.read(reinterpret_cast<char*>(b), 8)) throw config_error("snapshot: truncated file");
  std::uint64_t x = 0;
  for (int i = 7; i >= 0; --i) x = (x << 8) | b[i];
  return x;
}

inline std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw config_error("snapshot: truncated file");
  std::uint32_t x = 0;
  for (int i = 3; i >= 0; --i) x = (x << 8) | b[i];
  return x;
}

inline double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

}  // namespace detail

inline void write_snapshot(std::ostream& os, const Grid& g, const VelocityField& v) {
  os.write(snapshot_magic, 8);
  detail::put_u32(os, snapshot_version);
  detail::put_u32(os, 0);
  detail::put_f64(os, g.R());
  detail::put_f64(os, g.a());
  detail::put_f64(os, g.nu());
  detail::put_u64(os, static_cast<std::uint64_t>(g.nr));
  detail::put_u64(os, static_cast<std::uint64_t>(g.nz));
  detail::put_f64(os, v.t);
  for (const Field2D* f : {&v.v_r, &v.v_phi, &v.v_z, &v.p}) {
    if (f->nr() != g.nr || f->nz() != g.nz) throw config_error("snapshot: field shape does not match grid");
    for (double x : f->raw()) detail::put_f64(os, x);
  }
}

inline void write_snapshot(const std::string& path, const Grid& g, const VelocityField& v) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open snapshot for writing: " + path);
  write_snapshot(os, g, v);
  if (!os) throw config_error("failed writing snapshot: " + path);
}

inline Snapshot read_snapshot(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, snapshot_magic, 8) != 0)
    throw config_error("snapshot: bad magic");
  Snapshot s;
  s.version = detail::get_u32(is);
  if (s.version != snapshot_version)
    throw config_error("snapshot: unsupported version " + std::to_string(s.version));
  detail::get_u32(is);
  s.domain.R = detail::get_f64(is);
  s.domain.a = detail::get_f64(is);
  s.domain.nu = detail::get_f64(is);
  const std::uint64_t nr = detail::get_u64(is), nz = detail::get_u64(is);
  if (nr < 1 || nz < 1 || nr > (1u << 20) || nz > (1u << 20)) throw config_error("snapshot: bad grid size");
  s.nr = static_cast<int>(nr);
  s.nz = static_cast<int>(nz);
  s.domain.validate();
  s.state.t = detail::get_f64(is);
  for (Field2D* f : {&s.state.v_r, &s.state.v_phi, &s.state.v_z, &s.state.p}) {
    *f = Field2D(s.nr, s.nz);
    for (double& x : f->raw()) x = detail::get_f64(is);
  }
  return s;
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw config_error("cannot open snapshot: " + path);
  return read_snapshot(is);
}

// ---------------------------------------------------------------------------
// Certificate report (structured text: "key: value" lines in [sections])

inline void write_ledger(std::ostream& os, const ConstantsLedger& L) {
  os << "[ledger]\n";
  os << "d0: " << format_number(L.d0) << '\n';
  os << "d1: " << format_number(L.d1) << '\n';
  os << "d2: " << format_number(L.d2) << '\n';
  os << "l2_0: " << format_number(L.l2_0) << '\n';
  os << "swirl0: " << format_number(L.swirl0) << '\n';
  os << "c0: " << format_number(L.c0) << '\n';
  os << "alpha: " << format_number(L.alpha) << '\n';
  os << "c_mult: " << format_number(L.c_mult) << '\n';
  os << "c_star_emp: " << format_number(L.c_star_emp) << '\n';
  os << "c_k_emp: " << format_number(L.c_k_emp) << '\n';
  os << "nu: " << format_number(L.nu) << '\n';
  os << "nu_star_emp: " << format_number(L.nu_star_emp()) << '\n';
  os << "r0: " << format_number(L.r0) << '\n';
  os << "axis_threshold: " << format_number(L.axis_threshold) << '\n';
}

inline void write_checks(std::ostream& os, const std::vector<InequalityCheck>& checks,
                         const std::string& indent = "") {
  for (const auto& c : checks)
    os << indent << c.name << ": " << (c.passed ? "pass" : "FAIL") << " kind=" << to_string(c.kind)
       << " lhs=" << format_number(c.lhs) << " rhs=" << format_number(c.rhs)
       << " margin=" << format_number(c.margin()) << '\n';
}

inline void write_certificate(std::ostream& os, const ContinuationResult& res, const ConstantsLedger& L,
                              const std::string& c_star_source, double korn_var) {
  os << "# axisym certificate v1\n";
  os << "[plan]\n";
  os << "alpha: " << format_number(res.plan.alpha) << '\n';
  os << "c_star: " << format_number(res.plan.c_star) << '\n';
  os << "c_star_source: " << c_star_source << '\n';
  os << "T_seg: " << format_number(res.plan.T_seg) << '\n';
  os << "K: " << res.plan.K << '\n';
  os << "total_time: " << format_number(res.plan.total_time()) << '\n';
  write_ledger(os, L);
  os << "korn_second_half_variation: " << format_number(korn_var) << '\n';
  for (const auto& s : res.segments) {
    os << "[segment " << s.k << "]\n";
    os << "t_start: " << format_number(s.t_start) << '\n';
    os << "t_end: " << format_number(s.t_end) << '\n';
    os << "steps: " << s.steps << '\n';
    os << "h1_at_boundary: " << format_number(s.h1_at_boundary) << '\n';
    os << "passed: " << (s.passed ? "true" : "false") << '\n';
    os << "w21_proxy: " << format_number(s.w21_proxy) << '\n';
    if (s.failed) {
      os << "failure: " << s.failure << '\n';
      os << "failure_t: " << format_number(s.failure_t) << '\n';
      os << "failure_residual: " << format_number(s.failure_residual) << '\n';
    }
    os << "checks:\n";
    write_checks(os, s.worst, "  ");
  }
  os << "[summary]\n";
  os << "segments_run: " << res.segments.size() << '\n';
  os << "all_passed: " << (res.all_passed() ? "true" : "false") << '\n';
}

}  // namespace axisym
