#include "heomcorr/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "heomcorr/errors.hpp"

namespace heomcorr {

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[48];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 12);
  if (ec != std::errc()) throw ContractError("number formatting failed");
  return std::string(buf, ptr);
}

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> columns = {
      "t",         "I",         "C",         "Q",         "theta_star", "phi_star",
      "lambda_lo", "lambda_hi", "rho_00",    "rho_11",    "rho_22",     "rho_33",
      "re_rho_03", "im_rho_03", "re_rho_12", "im_rho_12"};
  return columns;
}

std::string format_trajectory_csv(std::span<const CorrelationPoint> points,
                                  std::span<const Operator> states) {
  if (points.size() != states.size())
    throw ContractError("trajectory CSV needs one state per point");
  std::string out;
  const auto& columns = trajectory_columns();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const Operator& rho = states[i];
    const double values[] = {p.t,
                             p.mutual_information,
                             p.classical,
                             p.quantum,
                             p.angles.theta,
                             p.angles.phi,
                             p.lambda_lo,
                             p.lambda_hi,
                             rho(0, 0).real(),
                             rho(1, 1).real(),
                             rho(2, 2).real(),
                             rho(3, 3).real(),
                             rho(0, 3).real(),
                             rho(0, 3).imag(),
                             rho(1, 2).real(),
                             rho(1, 2).imag()};
    bool first = true;
    for (double v : values) {
      if (!first) out += ',';
      out += format_number(v);
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::vector<CorrelationPoint> parse_trajectory_csv(std::string_view text) {
  std::vector<CorrelationPoint> points;
  const auto& columns = trajectory_columns();
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    std::vector<std::string_view> fields;
    while (true) {
      const auto comma = line.find(',');
      fields.push_back(line.substr(0, comma));
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (fields.size() != columns.size())
      throw InputError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(columns.size()) + " columns");
    if (line_no == 1) {
      for (std::size_t c = 0; c < columns.size(); ++c)
        if (fields[c] != columns[c])
          throw InputError("unexpected header column '" + std::string(fields[c]) + "'");
      continue;
    }
    double v[16];
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const auto f = fields[c];
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v[c]);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw InputError("line " + std::to_string(line_no) + ": malformed number in column " +
                         columns[c]);
    }
    CorrelationPoint p;
    p.t = v[0];
    p.mutual_information = v[1];
    p.classical = v[2];
    p.quantum = v[3];
    p.angles = {v[4], v[5]};
    p.lambda_lo = v[6];
    p.lambda_hi = v[7];
    points.push_back(p);
  }
  if (line_no == 0) throw InputError("empty trajectory file");
  return points;
}

std::string format_events(std::span<const Event> events) {
  std::string out;
  for (const auto& e : events) {
    out += to_string(e.kind) + '\t' + format_number(e.t) + '\t' + e.detail;
    if (e.kind != EventKind::Crossing) out += '\t' + format_number(e.magnitude);
    out += '\n';
  }
  return out;
}

void write_file_atomically(const std::string& path, std::string_view contents) {
  const std::filesystem::path target(path);
  if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
  const std::filesystem::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw InputError("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace heomcorr
