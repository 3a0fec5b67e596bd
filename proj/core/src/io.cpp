#include "photonbox/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "photonbox/errors.hpp"

namespace photonbox {

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError("rename failed for " + target.string() + ": " + ec.message());
  }
}

std::string atoms_to_csv(const std::vector<AtomRecord>& atoms) {
  std::string out = "time_s,true_n,detected\n";
  for (const AtomRecord& a : atoms) {
    out += format_double(a.time);
    out += ',';
    out += std::to_string(a.true_n);
    out += ',';
    out += static_cast<char>(a.detected);
    out += '\n';
  }
  return out;
}

namespace {

[[noreturn]] void csv_fail(long line, const std::string& what) {
  throw ConfigError("atoms csv line " + std::to_string(line) + ": " + what);
}

double parse_csv_double(const std::string& field, long line) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    csv_fail(line, "bad number '" + field + "'");
  return v;
}

}  // namespace

std::vector<AtomRecord> atoms_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("atoms csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,true_n,detected")
    throw ConfigError("atoms csv: expected header time_s,true_n,detected");

  std::vector<AtomRecord> atoms;
  long lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t c1 = line.find(',');
    size_t c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
      csv_fail(lineno, "expected 3 fields");
    AtomRecord rec;
    rec.time = parse_csv_double(line.substr(0, c1), lineno);
    double n = parse_csv_double(line.substr(c1 + 1, c2 - c1 - 1), lineno);
    rec.true_n = static_cast<FockLevel>(n);
    if (static_cast<double>(rec.true_n) != n || rec.true_n < 0)
      csv_fail(lineno, "true_n must be a non-negative integer");
    std::string state = line.substr(c2 + 1);
    if (state == "E")
      rec.detected = AtomState::E;
    else if (state == "G")
      rec.detected = AtomState::G;
    else
      csv_fail(lineno, "detected must be E or G, got '" + state + "'");
    atoms.push_back(rec);
  }
  return atoms;
}

std::vector<AtomRecord> read_atoms_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return atoms_from_csv(buf.str());
}

std::string decoded_to_csv(const DecodedTrace& trace) {
  std::string out = "time_s,inferred\n";
  for (const DecodedSample& s : trace.samples) {
    out += format_double(s.time);
    out += ',';
    out += std::to_string(s.inferred);
    out += '\n';
  }
  return out;
}

std::string jumps_to_json(const DecodedTrace& trace) {
  nlohmann::json arr = nlohmann::json::array();
  for (const DecodedJump& j : trace.jumps)
    arr.push_back({{"time_s", j.time}, {"from", j.from}, {"to", j.to}});
  return arr.dump(2) + "\n";
}

std::string trajectory_to_csv(const FieldTrajectory& traj) {
  std::string out = "time_s,n\n";
  out += "0,";
  out += std::to_string(traj.initial_n);
  out += '\n';
  for (const JumpEvent& e : traj.events) {
    out += format_double(e.time);
    out += ',';
    out += std::to_string(e.to_n);
    out += '\n';
  }
  return out;
}

std::string curve_to_csv(const EnsembleCurve& curve) {
  std::string out = "time_s,p1,std_error\n";
  for (size_t i = 0; i < curve.t_grid.size(); ++i) {
    out += format_double(curve.t_grid[i]);
    out += ',';
    out += format_double(curve.mean[i]);
    out += ',';
    out += format_double(curve.std_error[i]);
    out += '\n';
  }
  return out;
}

std::string overlay_to_csv(const std::vector<double>& t_grid,
                           const std::vector<double>& p1) {
  if (t_grid.size() != p1.size())
    throw ConfigError("overlay: grid and values differ in length");
  std::string out = "time_s,p1_ode\n";
  for (size_t i = 0; i < t_grid.size(); ++i) {
    out += format_double(t_grid[i]);
    out += ',';
    out += format_double(p1[i]);
    out += '\n';
  }
  return out;
}

std::string histogram_to_csv(const std::vector<double>& times, double bin_width,
                             int n_bins) {
  if (bin_width <= 0.0 || n_bins < 1)
    throw ConfigError("histogram: bin_width and n_bins must be positive");
  std::vector<long> counts(static_cast<size_t>(n_bins), 0);
  for (double t : times) {
    if (t < 0.0) continue;
    auto k = static_cast<long>(t / bin_width);
    if (k < n_bins) ++counts[static_cast<size_t>(k)];
  }
  std::string out = "bin_left_s,bin_right_s,count\n";
  for (int k = 0; k < n_bins; ++k) {
    out += format_double(k * bin_width);
    out += ',';
    out += format_double((k + 1) * bin_width);
    out += ',';
    out += std::to_string(counts[static_cast<size_t>(k)]);
    out += '\n';
  }
  return out;
}

std::string dwells_to_csv(const std::vector<double>& times) {
  std::string out = "dwell_s\n";
  for (double t : times) {
    out += format_double(t);
    out += '\n';
  }
  return out;
}

}  // namespace photonbox
