#include "dfs/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dfs {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(int line, const std::string& what) {
  throw InvalidInput("pulse file line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    bad(line, "expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) bad(line, "expected a finite number, got '" + s + "'");
  return v;
}

std::string header_value(std::istream& in, const std::string& key, int& line) {
  std::string text;
  if (!std::getline(in, text)) bad(line + 1, "missing '" + key + "' header");
  ++line;
  std::istringstream ls(text);
  std::string k, v, extra;
  ls >> k >> v;
  if (k != key) bad(line, "expected '" + key + "', got '" + k + "'");
  if (v.empty()) bad(line, "'" + key + "' has no value");
  if (ls >> extra) bad(line, "trailing text after '" + key + "'");
  return v;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string format_pulse_file(const PulseFile& f) {
  f.pulse.validate(f.amp_max_hz);
  if (f.target.empty() || f.target.find_first_of(" \t\n") != std::string::npos)
    throw InvalidInput("pulse file: target name must be a single word");
  std::ostringstream out;
  out << "# dfs-pulse " << kPulseFormatVersion << "\n";
  out << "dt_s " << num(f.pulse.dt) << "\n";
  out << "n_steps " << f.pulse.n_steps() << "\n";
  out << "amp_max_hz " << num(f.amp_max_hz) << "\n";
  out << "target " << f.target << "\n";
  out << "config_hash " << (f.config_hash.empty() ? "none" : f.config_hash) << "\n";
  for (const auto& a : f.pulse.amps) out << num(a[0]) << " " << num(a[1]) << "\n";
  return out.str();
}

PulseFile parse_pulse_file(const std::string& text) {
  std::istringstream in(text);
  int line = 0;
  std::string first;
  if (!std::getline(in, first)) bad(1, "empty file");
  ++line;
  const std::string magic = "# dfs-pulse ";
  if (first.rfind(magic, 0) != 0) bad(line, "not a pulse file (missing '# dfs-pulse' header)");
  if (first.substr(magic.size()) != std::to_string(kPulseFormatVersion))
    bad(line, "unsupported format version '" + first.substr(magic.size()) + "'");

  PulseFile f;
  f.pulse.dt = parse_double(header_value(in, "dt_s", line), line);
  const std::string n_text = header_value(in, "n_steps", line);
  if (n_text.find_first_not_of("0123456789") != std::string::npos) bad(line, "n_steps must be an integer");
  const std::size_t n = std::stoull(n_text);
  f.amp_max_hz = parse_double(header_value(in, "amp_max_hz", line), line);
  f.target = header_value(in, "target", line);
  f.config_hash = header_value(in, "config_hash", line);
  if (f.config_hash == "none") f.config_hash.clear();

  std::string row;
  while (std::getline(in, row)) {
    ++line;
    if (row.empty()) continue;
    std::istringstream rs(row);
    std::string ux, uy, extra;
    if (!(rs >> ux >> uy) || (rs >> extra)) bad(line, "expected two amplitudes");
    f.pulse.amps.push_back({parse_double(ux, line), parse_double(uy, line)});
  }
  if (f.pulse.amps.size() != n)
    bad(line, "header declares " + std::to_string(n) + " steps but " + std::to_string(f.pulse.amps.size()) +
                  " rows follow");
  f.pulse.validate(f.amp_max_hz);
  return f;
}

void write_pulse_file(const std::string& path, const PulseFile& f) { write_text(path, format_pulse_file(f)); }

PulseFile read_pulse_file(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_pulse_file(text);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_report(const std::string& dir, const ExperimentReport& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create report directory '" + dir + "': " + ec.message());
  const std::filesystem::path base(dir);

  std::ostringstream s;
  s << "experiment = " << report.name << "\n";
  s << "config_hash = " << (report.config_hash.empty() ? "none" : report.config_hash) << "\n";
  for (const auto& [k, v] : report.parameters) s << "param." << k << " = " << v << "\n";
  for (const auto& [k, v] : report.scalars) s << k << " = " << num(v) << "\n";
  write_text((base / "summary.txt").string(), s.str());

  for (const auto& t : report.tables) {
    std::ostringstream csv;
    for (std::size_t c = 0; c < t.columns.size(); ++c) csv << (c ? "," : "") << t.columns[c];
    csv << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) csv << (c ? "," : "") << num(row[c]);
      csv << "\n";
    }
    write_text((base / (t.name + ".csv")).string(), csv.str());
  }
  for (const auto& [name, m] : report.matrices) {
    std::ostringstream csv;
    csv << "row,col,re,im\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        csv << r << "," << c << "," << num(m(r, c).real()) << "," << num(m(r, c).imag()) << "\n";
    write_text((base / (name + ".csv")).string(), csv.str());
  }
}

std::vector<std::pair<std::string, std::string>> read_summary(const std::string& dir) {
  std::istringstream in(read_text((std::filesystem::path(dir) / "summary.txt").string()));
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    out.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return out;
}

}  // namespace dfs
