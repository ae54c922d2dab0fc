/**
 * @file output.hpp
 * @brief Plot-ready CSV writers, metadata documents and the custom
 *        initial-state file format.
 *
 * Every data file `name.csv` is paired with `name.meta.json`. Numbers are
 * written with 17 significant digits so values round-trip exactly.
 */
#pragma once

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ptdiamond/bands.hpp"
#include "ptdiamond/diagnostics.hpp"
#include "ptdiamond/model.hpp"

namespace ptdiamond {

inline constexpr const char* kToolName = "ptdiamond";
inline constexpr const char* kToolVersion = "1.0.0";

inline std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Opens `path` for writing, creating parent directories.
inline std::ofstream open_output(const std::filesystem::path& path) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() +
                                   ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

inline std::filesystem::path meta_path_for(const std::filesystem::path& data) {
  std::filesystem::path p = data;
  p.replace_extension(".meta.json");
  return p;
}

inline nlohmann::json to_json(const ModelParams& p) {
  return {{"gamma", p.gamma}, {"e_par", p.e_par},   {"e_perp", p.e_perp},
          {"phi", p.phi},     {"n_min", p.n_min},   {"n_max", p.n_max},
          {"boundary", "open"}};
}

inline void write_metadata(const std::filesystem::path& data_file, nlohmann::json meta) {
  meta["tool"] = kToolName;
  meta["tool_version"] = kToolVersion;
  meta["data_file"] = data_file.filename().string();
  meta["lambda_convention"] = kLambdaConvention;
  auto f = open_output(meta_path_for(data_file));
  f << meta.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + meta_path_for(data_file).string());
}

/// k, re_l1, im_l1, re_l2, im_l2, re_l3, im_l3 in tracked band order.
inline void write_bands_csv(std::ostream& os, const BandSweep& sw) {
  os << "k,re_l1,im_l1,re_l2,im_l2,re_l3,im_l3\n";
  for (std::size_t i = 0; i < sw.size(); ++i) {
    os << fmt_num(sw.grid[i]);
    for (int b = 0; b < 3; ++b) {
      const cplx l = sw.band(b, i);
      os << ',' << fmt_num(l.real()) << ',' << fmt_num(l.imag());
    }
    os << '\n';
  }
}

inline void write_spectrum_csv(std::ostream& os, const SpectrumReport& rep) {
  os << "index,re,im\n";
  for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i)
    os << i << ',' << fmt_num(rep.eigenvalues[i].real()) << ','
       << fmt_num(rep.eigenvalues[i].imag()) << '\n';
}

inline constexpr const char* kIntensityHeader = "z,n,rho\n";
inline constexpr const char* kDiagnosticsHeader =
    "z,total_power,com,asymmetry,width,excited_power,complement_power\n";

inline void write_intensity_rows(std::ostream& os, const IntensityProfile& p) {
  for (std::size_t i = 0; i < p.rho.size(); ++i)
    os << fmt_num(p.z) << ',' << (p.n_min + static_cast<int>(i)) << ',' << fmt_num(p.rho[i])
       << '\n';
}

inline void write_diagnostics_row(std::ostream& os, const DiagnosticsPoint& d) {
  os << fmt_num(d.z) << ',' << fmt_num(d.total_power) << ',' << fmt_num(d.center_of_mass) << ','
     << fmt_num(d.asymmetry) << ',' << fmt_num(d.width) << ',' << fmt_num(d.excited_power) << ','
     << fmt_num(d.complement_power) << '\n';
}

// State files: "# z=<value>" then "n,a_re,a_im,b_re,b_im,c_re,c_im", one
// row per cell in ascending n.

inline void write_state(std::ostream& os, const LatticeState& s) {
  os << "# z=" << fmt_num(s.z) << '\n' << "n,a_re,a_im,b_re,b_im,c_re,c_im\n";
  for (int n = s.n_min; n <= s.n_max(); ++n) {
    os << n;
    for (const cplx& v : {s.a(n), s.b(n), s.c(n)})
      os << ',' << fmt_num(v.real()) << ',' << fmt_num(v.imag());
    os << '\n';
  }
}

inline LatticeState read_state(std::istream& is, const std::string& origin = "state") {
  LatticeState s;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ValidationError(origin + ":" + std::to_string(lineno) + ": " + why);
  };
  if (!std::getline(is, line)) fail("empty file");
  ++lineno;
  if (line.rfind("# z=", 0) != 0) fail("expected '# z=<value>'");
  try {
    s.z = std::stod(line.substr(4));
  } catch (const std::exception&) {
    fail("bad z value");
  }
  if (!std::getline(is, line) || line != "n,a_re,a_im,b_re,b_im,c_re,c_im") {
    ++lineno;
    fail("expected header n,a_re,a_im,b_re,b_im,c_re,c_im");
  }
  ++lineno;
  std::vector<cplx> vals;
  int expect = 0;
  bool first = true;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> fields;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    if (fields.size() != 7) fail("expected 7 fields");
    int n = 0;
    double x[6];
    try {
      std::size_t used = 0;
      n = std::stoi(fields[0], &used);
      if (used != fields[0].size()) fail("bad cell index");
      for (int i = 0; i < 6; ++i) x[i] = std::stod(fields[i + 1]);
    } catch (const ValidationError&) {
      throw;
    } catch (const std::exception&) {
      fail("bad number");
    }
    if (first) {
      s.n_min = n;
      expect = n;
      first = false;
    }
    if (n != expect) fail("cells must be contiguous and ascending");
    ++expect;
    for (int i = 0; i < 3; ++i) vals.emplace_back(x[2 * i], x[2 * i + 1]);
  }
  if (vals.empty()) fail("no cells");
  s.amps = Eigen::Map<const Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
  if (!s.is_finite()) fail("non-finite amplitude");
  return s;
}

inline LatticeState read_state_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read state file " + path.string());
  return read_state(f, path.string());
}

}  // namespace ptdiamond
