#include "heomcorr/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

#include "heomcorr/errors.hpp"

namespace heomcorr {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// "a", "bi", "a+bi", "a-bi", "i", "-i"
std::optional<Complex> to_complex(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  if (s.back() != 'i') {
    const auto re = to_double(s);
    return re ? std::optional<Complex>(Complex{*re, 0.0}) : std::nullopt;
  }
  s.remove_suffix(1);
  // split at the last sign that is not an exponent sign or the leading one
  std::size_t split = std::string_view::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  auto imag_of = [](std::string_view t) -> std::optional<double> {
    t = trim(t);
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return to_double(t);
  };
  if (split == std::string_view::npos) {
    const auto im = imag_of(s);
    return im ? std::optional<Complex>(Complex{0.0, *im}) : std::nullopt;
  }
  const auto re = to_double(s.substr(0, split));
  const auto im = imag_of(s.substr(split));
  if (!re || !im) return std::nullopt;
  return Complex{*re, *im};
}

std::string format_complex(Complex c) {
  std::string out = format_double(c.real());
  if (c.imag() != 0.0 || std::signbit(c.imag())) {
    const std::string im = format_double(c.imag());
    out += (im.front() == '-' ? "" : "+") + im + "i";
  }
  return out;
}

std::optional<std::array<Complex, 16>> to_matrix(std::string_view s) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
  s = s.substr(1, s.size() - 2);
  std::array<Complex, 16> out{};
  int row = 0;
  while (true) {
    const auto semi = s.find(';');
    std::string_view line = s.substr(0, semi);
    if (row >= 4) return std::nullopt;
    int col = 0;
    while (true) {
      const auto comma = line.find(',');
      const auto value = to_complex(line.substr(0, comma));
      if (!value || col >= 4) return std::nullopt;
      out[static_cast<std::size_t>(4 * row + col)] = *value;
      ++col;
      if (comma == std::string_view::npos) break;
      line.remove_prefix(comma + 1);
    }
    if (col != 4) return std::nullopt;
    ++row;
    if (semi == std::string_view::npos) break;
    s.remove_prefix(semi + 1);
  }
  if (row != 4) return std::nullopt;
  return out;
}

std::string unquote(std::string_view s) {
  s = trim(s);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return std::string(s);
}

struct Field {
  std::string key;
  std::function<bool(SimulationConfig&, std::string_view)> parse;  // false = malformed
  std::function<std::string(const SimulationConfig&)> format;
};

Field real_field(std::string key, double SimulationConfig::*member) {
  return {std::move(key),
          [member](SimulationConfig& c, std::string_view v) {
            const auto d = to_double(v);
            if (!d) return false;
            c.*member = *d;
            return true;
          },
          [member](const SimulationConfig& c) { return format_double(c.*member); }};
}

Field int_field(std::string key, int SimulationConfig::*member) {
  return {std::move(key),
          [member](SimulationConfig& c, std::string_view v) {
            v = trim(v);
            int i = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
            if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) return false;
            c.*member = i;
            return true;
          },
          [member](const SimulationConfig& c) { return std::to_string(c.*member); }};
}

Field auto_int_field(std::string key, std::optional<int> SimulationConfig::*member) {
  return {std::move(key),
          [member](SimulationConfig& c, std::string_view v) {
            v = trim(v);
            if (v == "auto") {
              c.*member = std::nullopt;
              return true;
            }
            int i = 0;
            const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
            if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) return false;
            c.*member = i;
            return true;
          },
          [member](const SimulationConfig& c) {
            return (c.*member) ? std::to_string(*(c.*member)) : std::string("auto");
          }};
}

Field string_field(std::string key, std::string SimulationConfig::*member) {
  return {std::move(key),
          [member](SimulationConfig& c, std::string_view v) {
            c.*member = unquote(v);
            return true;
          },
          [member](const SimulationConfig& c) { return "\"" + c.*member + "\""; }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    using S = SimulationConfig;
    std::vector<Field> f;
    f.push_back(real_field("epsilon", &S::epsilon));
    f.push_back(real_field("zeta", &S::zeta));
    f.push_back(real_field("eta", &S::eta));
    f.push_back(real_field("gamma", &S::gamma));
    f.push_back(real_field("beta", &S::beta));
    f.push_back({"initial_state",
                 [](S& c, std::string_view v) {
                   v = trim(v);
                   if (v == "bell-odd") {
                     c.initial_state = {InitialStateKind::BellOdd, {}};
                   } else if (v == "bell-even") {
                     c.initial_state = {InitialStateKind::BellEven, {}};
                   } else {
                     const auto m = to_matrix(v);
                     if (!m) return false;
                     c.initial_state = {InitialStateKind::Explicit, *m};
                   }
                   return true;
                 },
                 [](const S& c) -> std::string {
                   switch (c.initial_state.kind) {
                     case InitialStateKind::BellOdd: return "bell-odd";
                     case InitialStateKind::BellEven: return "bell-even";
                     case InitialStateKind::Explicit: break;
                   }
                   std::string out = "[";
                   for (int i = 0; i < 16; ++i) {
                     if (i > 0) out += (i % 4 == 0) ? "; " : ", ";
                     out += format_complex(c.initial_state.entries[static_cast<std::size_t>(i)]);
                   }
                   return out + "]";
                 }});
    f.push_back(real_field("t_max", &S::t_max));
    f.push_back(real_field("grid_dt", &S::grid_dt));
    f.push_back(auto_int_field("K", &S::cutoff));
    f.push_back(auto_int_field("L", &S::depth_limit));
    f.push_back(int_field("converge_start_K", &S::converge_start_cutoff));
    f.push_back(int_field("converge_start_L", &S::converge_start_depth));
    f.push_back(real_field("converge_tol", &S::converge_tol));
    f.push_back({"max_ados",
                 [](S& c, std::string_view v) {
                   v = trim(v);
                   std::size_t n = 0;
                   const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
                   if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) return false;
                   c.max_ados = n;
                   return true;
                 },
                 [](const S& c) { return std::to_string(c.max_ados); }});
    f.push_back({"terminator",
                 [](S& c, std::string_view v) {
                   v = trim(v);
                   if (v == "verbatim") c.terminator = TerminatorForm::Verbatim;
                   else if (v == "tail-sum") c.terminator = TerminatorForm::TailSum;
                   else return false;
                   return true;
                 },
                 [](const S& c) {
                   return std::string(c.terminator == TerminatorForm::Verbatim ? "verbatim"
                                                                               : "tail-sum");
                 }});
    f.push_back(real_field("atol", &S::atol));
    f.push_back(real_field("rtol", &S::rtol));
    f.push_back(int_field("opt_n_theta", &S::opt_n_theta));
    f.push_back(int_field("opt_n_phi", &S::opt_n_phi));
    f.push_back(int_field("event_window", &S::event_window));
    f.push_back(real_field("event_threshold", &S::event_threshold));
    f.push_back(int_field("event_median_half_width", &S::event_median_half_width));
    f.push_back(real_field("event_noise_floor", &S::event_noise_floor));
    f.push_back(real_field("plateau_tol", &S::plateau_tol));
    f.push_back(real_field("plateau_ratio", &S::plateau_ratio));
    f.push_back(int_field("plateau_samples", &S::plateau_samples));
    f.push_back({"oracles",
                 [](S& c, std::string_view v) {
                   v = trim(v);
                   if (v == "true") c.oracles = true;
                   else if (v == "false") c.oracles = false;
                   else return false;
                   return true;
                 },
                 [](const S& c) { return std::string(c.oracles ? "true" : "false"); }});
    f.push_back(int_field("workers", &S::workers));
    f.push_back(string_field("output_dir", &S::output_dir));
    f.push_back(string_field("output_prefix", &S::output_prefix));
    return f;
  }();
  return table;
}

[[noreturn]] void invalid(const std::string& key, const std::string& why) {
  throw ConfigError("invalid value for '" + key + "': " + why);
}

}  // namespace

SolverSettings SimulationConfig::solver() const {
  SolverSettings s;
  s.atol = atol;
  s.rtol = rtol;
  return s;
}

OptimizerSettings SimulationConfig::optimizer() const {
  OptimizerSettings o;
  o.n_theta = opt_n_theta;
  o.n_phi = opt_n_phi;
  return o;
}

TransitionSettings SimulationConfig::events() const {
  TransitionSettings t;
  t.sudden.window = event_window;
  t.sudden.threshold = event_threshold;
  t.sudden.median_half_width = event_median_half_width;
  t.sudden.noise_floor = event_noise_floor;
  t.plateau_tol = plateau_tol;
  t.plateau_ratio = plateau_ratio;
  t.side_samples = plateau_samples;
  return t;
}

ConvergenceSettings SimulationConfig::convergence() const {
  ConvergenceSettings c;
  c.start_cutoff = converge_start_cutoff;
  c.start_depth = converge_start_depth;
  c.tolerance = converge_tol;
  c.max_ados = max_ados;
  c.terminator = terminator;
  return c;
}

DensityMatrix make_initial_state(const InitialState& spec) {
  switch (spec.kind) {
    case InitialStateKind::BellOdd: return states::bell_odd();
    case InitialStateKind::BellEven: return states::bell_even();
    case InitialStateKind::Explicit: break;
  }
  Operator m(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = spec.entries[static_cast<std::size_t>(4 * r + c)];
  return DensityMatrix(m);
}

void validate_config(const SimulationConfig& c) {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(c.epsilon)) invalid("epsilon", "must be finite");
  if (!finite(c.zeta)) invalid("zeta", "must be finite");
  if (!(c.eta >= 0.0) || !finite(c.eta)) invalid("eta", "must be >= 0");
  if (!(c.gamma > 0.0) || !finite(c.gamma)) invalid("gamma", "must be > 0");
  if (!(c.beta > 0.0) || !finite(c.beta)) invalid("beta", "must be > 0");
  try {
    c.bath().validate();
  } catch (const ParameterError& e) {
    invalid("beta", e.what());
  }
  if (c.initial_state.kind == InitialStateKind::Explicit) {
    try {
      make_initial_state(c.initial_state);
    } catch (const std::exception& e) {
      invalid("initial_state", e.what());
    }
  }
  if (!(c.grid_dt > 0.0)) invalid("grid_dt", "must be > 0");
  if (!(c.t_max >= c.grid_dt)) invalid("t_max", "must be >= grid_dt");
  if (c.cutoff && *c.cutoff < 0) invalid("K", "must be >= 0 or auto");
  if (c.depth_limit && *c.depth_limit < 0) invalid("L", "must be >= 0 or auto");
  if (c.cutoff.has_value() != c.depth_limit.has_value())
    invalid(c.cutoff ? "L" : "K", "K and L must both be set or both be auto");
  if (c.converge_start_cutoff < 0) invalid("converge_start_K", "must be >= 0");
  if (c.converge_start_depth < 0) invalid("converge_start_L", "must be >= 0");
  if (!(c.converge_tol > 0.0)) invalid("converge_tol", "must be > 0");
  if (c.max_ados < 1) invalid("max_ados", "must be >= 1");
  if (!(c.atol > 0.0)) invalid("atol", "must be > 0");
  if (!(c.rtol > 0.0)) invalid("rtol", "must be > 0");
  if (c.opt_n_theta < 2) invalid("opt_n_theta", "must be >= 2");
  if (c.opt_n_phi < 1) invalid("opt_n_phi", "must be >= 1");
  if (c.event_window < 1) invalid("event_window", "must be >= 1");
  if (!(c.event_threshold > 0.0)) invalid("event_threshold", "must be > 0");
  if (c.event_median_half_width < 1) invalid("event_median_half_width", "must be >= 1");
  if (!(c.event_noise_floor >= 0.0)) invalid("event_noise_floor", "must be >= 0");
  if (!(c.plateau_tol > 0.0)) invalid("plateau_tol", "must be > 0");
  if (!(c.plateau_ratio >= 0.0)) invalid("plateau_ratio", "must be >= 0");
  if (c.plateau_samples < 1) invalid("plateau_samples", "must be >= 1");
  if (c.workers < 1) invalid("workers", "must be >= 1");
  if (c.output_prefix.empty()) invalid("output_prefix", "must not be empty");
}

SimulationConfig parse_config(std::string_view text) {
  SimulationConfig config;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    // '#' outside quotes starts a comment
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (value.empty() || !it->parse(config, value)) {
      throw ConfigError("line " + std::to_string(line_no) + ": malformed value for '" + key +
                        "'");
    }
  }
  validate_config(config);
  return config;
}

SimulationConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimulationConfig& config) {
  std::string out;
  for (const auto& f : fields()) out += f.key + " = " + f.format(config) + "\n";
  return out;
}

}  // namespace heomcorr
