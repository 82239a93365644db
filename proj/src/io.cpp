#include <charconv>
#include <fstream>
#include <sstream>

#include "bolab/cli.hpp"

namespace bolab::cli {

using nlohmann::json;

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string diagnostics_csv(const Trajectory& traj) {
  std::string out = kDiagnosticsHeader;
  out += '\n';
  for (const auto& d : traj.diagnostics) {
    for (double v : {d.t, d.l2_sq, d.hhalf_sq, d.dhalf_sq, d.dx_sq, d.d32_sq, d.energy, d.cubic}) {
      out += format_number(v);
      out += ',';
    }
    out += format_number(d.linf);
    out += '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::string out = kSweepHeader;
  out += '\n';
  for (const auto& r : result.records) {
    out += format_number(r.epsilon) + ',' + format_number(r.sup_hhalf_err) + ',' +
           format_number(r.sup_l2_err) + ',' + format_number(r.energy_drift) + ',' +
           format_number(r.l2_deficit) + '\n';
  }
  return out;
}

json rates_json(const SweepResult& result) {
  auto rate = [](const std::optional<RateFit>& f) { return f ? json(f->slope) : json(nullptr); };
  auto resid = [](const std::optional<RateFit>& f) {
    return f ? json(f->residual) : json(nullptr);
  };
  auto icpt = [](const std::optional<RateFit>& f) {
    return f ? json(f->intercept) : json(nullptr);
  };
  json doc;
  doc["hhalf_rate"] = rate(result.hhalf_rate);
  doc["energy_rate"] = rate(result.energy_rate);
  doc["residuals"] = {{"hhalf", resid(result.hhalf_rate)}, {"energy", resid(result.energy_rate)}};
  doc["intercepts"] = {{"hhalf", icpt(result.hhalf_rate)}, {"energy", icpt(result.energy_rate)}};
  doc["warnings"] = result.warnings;
  return doc;
}

// Layout:
//   # bolab-snapshots 1
//   # n_points <n>
//   # length <L>
//   # times <t_0> <t_1> ... <t_{s-1}>
//   then n rows of s space-separated values; row m holds u(x_m) of every
//   snapshot, so each column is one snapshot.
std::string snapshots_text(const Trajectory& traj) {
  std::ostringstream out;
  const Index n = traj.config.n_points;
  out << "# bolab-snapshots 1\n# n_points " << n << "\n# length "
      << format_number(traj.config.length) << "\n# times";
  for (double t : traj.times) out << ' ' << format_number(t);
  out << '\n';
  for (Index m = 0; m < n; ++m) {
    for (std::size_t s = 0; s < traj.snapshots.size(); ++s) {
      if (s) out << ' ';
      out << format_number(traj.snapshots[s].samples[m]);
    }
    out << '\n';
  }
  return out.str();
}

namespace {

double parse_double(std::string_view s, const std::string& what) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError(what, "not a number: \"" + std::string(s) + "\"");
  return v;
}

std::string expect_header(std::istream& in, const std::string& tag) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("snapshots", "truncated header");
  const std::string prefix = "# " + tag;
  if (line.rfind(prefix, 0) != 0) throw ConfigError("snapshots", "expected \"" + prefix + "\"");
  return line.substr(prefix.size());
}

}  // namespace

SnapshotTable read_snapshots(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("snapshots", "cannot read " + path.string());
  SnapshotTable table;
  if (expect_header(in, "bolab-snapshots") != " 1")
    throw ConfigError("snapshots", "unsupported version");
  table.n_points = std::stol(expect_header(in, "n_points"));
  table.length = parse_double(std::string_view(expect_header(in, "length")).substr(1), "length");
  {
    std::istringstream ts(expect_header(in, "times"));
    std::string tok;
    while (ts >> tok) table.times.push_back(parse_double(tok, "times"));
  }
  const auto cols = static_cast<Index>(table.times.size());
  table.samples.resize(table.n_points, cols);
  for (Index m = 0; m < table.n_points; ++m) {
    for (Index s = 0; s < cols; ++s) {
      std::string tok;
      if (!(in >> tok)) throw ConfigError("snapshots", "truncated sample table");
      table.samples(m, s) = parse_double(tok, "snapshots");
    }
  }
  return table;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto chomp = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) throw ConfigError("csv", "empty file");
  chomp(line);
  if (line != kSweepHeader) throw ConfigError("csv", "header must be \"" + std::string(kSweepHeader) + "\"");

  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    chomp(line);
    if (line.empty()) continue;
    std::vector<double> vals;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      vals.push_back(parse_double(std::string_view(line).substr(start, comma - start), "csv"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (vals.size() != 5) throw ConfigError("csv", "rows must have 5 columns");
    rows.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
  }
  if (rows.empty()) throw ConfigError("csv", "no data rows");
  return rows;
}

}  // namespace bolab::cli
