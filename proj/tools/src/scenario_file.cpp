#include "glweyl/cli/scenario_file.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <locale>
#include <regex>
#include <set>
#include <sstream>

namespace glweyl::cli {

ScenarioError::ScenarioError(std::string file, int line, std::string field, const std::string& message)
    : std::runtime_error(file + ":" + std::to_string(line) + ": field '" + field + "': " + message),
      file_(std::move(file)),
      line_(line),
      field_(std::move(field)) {}

int SourceMap::line_of(const std::string& section, const std::string& key) const {
  auto it = lines.find(section + "." + key);
  return it == lines.end() ? 0 : it->second;
}

namespace {

// ---------------------------------------------------------------------------
// Minimal TOML subset: [section] headers and `key = value` lines. Values are
// scalars or nested arrays, and arrays may span lines.

struct Value {
  enum class Type { string, number, boolean, array };
  Type type = Type::number;
  std::string text;
  double number = 0.0;
  std::optional<std::int64_t> integer;
  bool boolean = false;
  std::vector<Value> items;
};

struct Entry {
  std::string key;
  Value value;
  int line = 0;
};

struct Document {
  std::vector<std::pair<std::string, std::vector<Entry>>> sections;
};

class ValueParser {
 public:
  ValueParser(std::string_view text, const std::string& file, int line, const std::string& field)
      : text_(text), file_(file), line_(line), field_(field) {}

  Value run() {
    Value v = value();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters after value");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(file_, line_, field_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  Value value() {
    skip_ws();
    if (pos_ >= text_.size()) fail("missing value");
    const char c = text_[pos_];
    if (c == '"') return string();
    if (c == '[') return array();
    if (text_.substr(pos_, 4) == "true") {
      pos_ += 4;
      Value v;
      v.type = Value::Type::boolean;
      v.boolean = true;
      return v;
    }
    if (text_.substr(pos_, 5) == "false") {
      pos_ += 5;
      Value v;
      v.type = Value::Type::boolean;
      return v;
    }
    return number();
  }

  Value string() {
    ++pos_;
    Value v;
    v.type = Value::Type::string;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c == '\\') {
        if (pos_ >= text_.size()) break;
        const char e = text_[pos_++];
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape '\\") + e + "'");
        }
      }
      v.text += c;
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  Value array() {
    ++pos_;
    Value v;
    v.type = Value::Type::array;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    for (;;) {
      v.items.push_back(value());
      skip_ws();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ']') {
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  Value number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
                                   text_[pos_] == '+' || text_[pos_] == '-' || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string token(text_.substr(start, pos_ - start));
    std::erase(token, '_');
    static const std::regex integer_re(R"([+-]?[0-9]+)");
    static const std::regex float_re(R"([+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)([eE][+-]?[0-9]+)?)");
    Value v;
    v.type = Value::Type::number;
    std::istringstream is(token);
    is.imbue(std::locale::classic());
    if (std::regex_match(token, integer_re)) {
      std::int64_t i = 0;
      is >> i;
      if (is.fail()) fail("integer out of range: " + token);
      v.integer = i;
      v.number = static_cast<double>(i);
    } else if (std::regex_match(token, float_re)) {
      is >> v.number;
      if (is.fail() || !std::isfinite(v.number)) fail("number out of range: " + token);
    } else {
      fail("cannot read value '" + token + "' (strings must be quoted)");
    }
    return v;
  }

  std::string_view text_;
  const std::string& file_;
  int line_;
  const std::string& field_;
  std::size_t pos_ = 0;
};

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '\\' && in_string) {
      ++i;
    } else if (c == '"') {
      in_string = !in_string;
    } else if (c == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && in_string) {
      ++i;
    } else if (s[i] == '"') {
      in_string = !in_string;
    } else if (!in_string && s[i] == '[') {
      ++depth;
    } else if (!in_string && s[i] == ']') {
      --depth;
    }
  }
  return depth;
}

Document parse_document(const std::string& text, const std::string& file) {
  Document doc;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  std::set<std::string> seen_sections;
  std::set<std::string> seen_keys;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ScenarioError(file, line_no, line, "malformed section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!seen_sections.insert(name).second) throw ScenarioError(file, line_no, name, "duplicate section");
      doc.sections.emplace_back(name, std::vector<Entry>{});
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ScenarioError(file, line_no, line, "expected 'key = value'");
    if (doc.sections.empty()) throw ScenarioError(file, line_no, trim(line.substr(0, eq)), "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    std::string value_text = trim(line.substr(eq + 1));
    const int start_line = line_no;
    while (bracket_balance(value_text) > 0 && std::getline(in, raw)) {
      ++line_no;
      value_text += " " + trim(strip_comment(raw));
    }

    auto& [section, entries] = doc.sections.back();
    const std::string field = section + "." + key;
    if (!seen_keys.insert(field).second) throw ScenarioError(file, start_line, field, "duplicate key");
    entries.push_back(Entry{key, ValueParser(value_text, file, start_line, field).run(), start_line});
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Field readers

struct FieldContext {
  const std::string& file;
  std::string field;
  int line;

  [[noreturn]] void fail(const std::string& msg) const { throw ScenarioError(file, line, field, msg); }
};

std::string as_string(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::string) ctx.fail("expected a quoted string");
  return v.text;
}

double as_number(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::number) ctx.fail("expected a number");
  return v.number;
}

std::int64_t as_integer(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::number || !v.integer) ctx.fail("expected an integer");
  return *v.integer;
}

bool as_bool(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::boolean) ctx.fail("expected true or false");
  return v.boolean;
}

std::vector<std::string> as_string_list(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::array) ctx.fail("expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v.items) out.push_back(as_string(item, ctx));
  return out;
}

std::pair<double, double> as_range(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::array || v.items.size() != 2) ctx.fail("expected a range [lo, hi]");
  const double lo = as_number(v.items[0], ctx);
  const double hi = as_number(v.items[1], ctx);
  if (!(lo <= hi)) ctx.fail("range lower bound exceeds upper bound");
  return {lo, hi};
}

/// Either one range applied to every coordinate or one range per coordinate.
std::vector<std::pair<double, double>> as_box(const Value& v, const FieldContext& ctx) {
  if (v.type != Value::Type::array || v.items.empty()) ctx.fail("expected [lo, hi] or [[lo, hi], ...]");
  if (v.items.front().type == Value::Type::number) return {as_range(v, ctx)};
  std::vector<std::pair<double, double>> out;
  for (const auto& item : v.items) out.push_back(as_range(item, ctx));
  return out;
}

/// Splits "g_1_2" style keys into their integer suffixes.
std::optional<std::vector<int>> key_indices(const std::string& key, const std::string& prefix, std::size_t count) {
  if (key.rfind(prefix + "_", 0) != 0) return std::nullopt;
  std::vector<int> out;
  std::string rest = key.substr(prefix.size());
  static const std::regex part(R"(_([0-9]+))");
  auto begin = std::sregex_iterator(rest.begin(), rest.end(), part);
  std::string rebuilt;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.push_back(std::stoi((*it)[1].str()));
    rebuilt += (*it)[0].str();
  }
  if (rebuilt != rest || out.size() != count) return std::nullopt;
  return out;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(17);
  os << v;
  std::string s = os.str();
  // Keep floats recognisable as floats so integers and doubles round-trip.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '\t') {
      out += "\\t";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

std::string format_box(const std::vector<std::pair<double, double>>& box) {
  std::string out = "[";
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i > 0) out += ", ";
    out += "[" + format_number(box[i].first) + ", " + format_number(box[i].second) + "]";
  }
  return out + "]";
}

std::string format_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += quote(items[i]);
  }
  return out + "]";
}

}  // namespace

// ---------------------------------------------------------------------------

LoadedScenario parse_scenario_text(const std::string& text, const std::string& file_name) {
  const Document doc = parse_document(text, file_name);
  LoadedScenario loaded;
  ScenarioSpec& spec = loaded.spec;
  loaded.source.file = file_name;

  bool have_scenario = false;
  for (const auto& [section, entries] : doc.sections) {
    for (const auto& e : entries) {
      loaded.source.lines[section + "." + e.key] = e.line;
      const FieldContext ctx{file_name, section + "." + e.key, e.line};

      if (section == "scenario") {
        have_scenario = true;
        if (e.key == "name") {
          spec.name = as_string(e.value, ctx);
        } else if (e.key == "n") {
          const auto n = as_integer(e.value, ctx);
          if (n < 1 || n > 99) ctx.fail("dimension must lie in 1..99");
          spec.n = static_cast<int>(n);
        } else if (e.key == "seed") {
          const auto seed = as_integer(e.value, ctx);
          if (seed < 0) ctx.fail("seed must be non-negative");
          spec.seed = static_cast<std::uint64_t>(seed);
        } else if (e.key == "points") {
          const auto points = as_integer(e.value, ctx);
          if (points < 1) ctx.fail("points must be positive");
          spec.points = static_cast<std::size_t>(points);
        } else if (e.key == "engine") {
          spec.engine = as_string(e.value, ctx);
          if (spec.engine != "symbolic" && spec.engine != "fd") ctx.fail("engine must be \"symbolic\" or \"fd\"");
        } else if (e.key == "fd_step") {
          spec.fd_step = as_number(e.value, ctx);
          if (!(spec.fd_step > 0.0)) ctx.fail("fd_step must be positive");
        } else if (e.key == "tolerance") {
          spec.tolerance = as_number(e.value, ctx);
          if (!(*spec.tolerance >= 0.0)) ctx.fail("tolerance must be non-negative");
        } else if (e.key == "x_box" || e.key == "box") {
          spec.x_box = as_box(e.value, ctx);
        } else if (e.key == "y_box") {
          spec.y_box = as_box(e.value, ctx);
        } else if (e.key == "exclusions") {
          spec.exclusions = as_string_list(e.value, ctx);
        } else if (e.key == "exclusion_margin") {
          spec.exclusion_margin = as_number(e.value, ctx);
          if (!(spec.exclusion_margin >= 0.0)) ctx.fail("exclusion_margin must be non-negative");
        } else if (e.key == "signature") {
          if (e.value.type != Value::Type::array || e.value.items.size() != 2) ctx.fail("expected [positive, negative]");
          spec.signature = std::pair<int, int>{static_cast<int>(as_integer(e.value.items[0], ctx)),
                                               static_cast<int>(as_integer(e.value.items[1], ctx))};
        } else {
          ctx.fail("unknown key");
        }
      } else if (section == "metric") {
        const auto idx = key_indices(e.key, "g", 2);
        if (!idx) ctx.fail("expected a key of the form g_i_j");
        spec.metric[{(*idx)[0], (*idx)[1]}] = as_string(e.value, ctx);
      } else if (section == "nonlinear") {
        if (e.key == "canonical") {
          spec.canonical_nonlinear = as_bool(e.value, ctx);
          continue;
        }
        const auto idx = key_indices(e.key, "N", 2);
        if (!idx) ctx.fail("expected 'canonical' or a key of the form N_j_i");
        spec.nonlinear[{(*idx)[0], (*idx)[1]}] = as_string(e.value, ctx);
      } else if (section == "weyl") {
        const auto idx = key_indices(e.key, "w", 1);
        if (!idx) ctx.fail("expected a key of the form w_i");
        spec.weyl[(*idx)[0]] = as_string(e.value, ctx);
      } else if (section == "gauges") {
        if (e.key != "f") ctx.fail("expected 'f = [\"expr\", ...]'");
        spec.gauges = as_string_list(e.value, ctx);
      } else {
        throw ScenarioError(file_name, e.line, section, "unknown section");
      }
    }
  }
  if (!have_scenario) throw ScenarioError(file_name, 1, "scenario", "missing [scenario] section");
  return loaded;
}

LoadedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path, 0, "<file>", "cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

std::string serialize(const ScenarioSpec& spec) {
  std::ostringstream out;
  out.imbue(std::locale::classic());
  out << "[scenario]\n";
  out << "name = " << quote(spec.name) << "\n";
  out << "n = " << spec.n << "\n";
  out << "seed = " << spec.seed << "\n";
  out << "points = " << spec.points << "\n";
  out << "engine = " << quote(spec.engine) << "\n";
  out << "fd_step = " << format_number(spec.fd_step) << "\n";
  if (spec.tolerance) out << "tolerance = " << format_number(*spec.tolerance) << "\n";
  if (!spec.x_box.empty()) out << "x_box = " << format_box(spec.x_box) << "\n";
  if (!spec.y_box.empty()) out << "y_box = " << format_box(spec.y_box) << "\n";
  if (!spec.exclusions.empty()) out << "exclusions = " << format_list(spec.exclusions) << "\n";
  out << "exclusion_margin = " << format_number(spec.exclusion_margin) << "\n";
  if (spec.signature) out << "signature = [" << spec.signature->first << ", " << spec.signature->second << "]\n";

  out << "\n[metric]\n";
  for (const auto& [ij, text] : spec.metric) out << "g_" << ij.first << "_" << ij.second << " = " << quote(text) << "\n";

  out << "\n[nonlinear]\n";
  if (spec.canonical_nonlinear) out << "canonical = true\n";
  for (const auto& [ji, text] : spec.nonlinear) out << "N_" << ji.first << "_" << ji.second << " = " << quote(text) << "\n";

  out << "\n[weyl]\n";
  for (const auto& [i, text] : spec.weyl) out << "w_" << i << " = " << quote(text) << "\n";

  out << "\n[gauges]\n";
  out << "f = " << format_list(spec.gauges) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

Scenario build_scenario(const ScenarioSpec& spec, const SourceMap& source) {
  const int n = spec.n;
  auto fail = [&](const std::string& section, const std::string& key, const std::string& msg) -> void {
    throw ScenarioError(source.file.empty() ? "<" + spec.name + ">" : source.file, source.line_of(section, key),
                        section + "." + key, msg);
  };
  auto expr = [&](const std::string& text, const std::string& section, const std::string& key) {
    try {
      return parse(text, n);
    } catch (const ParseError& e) {
      fail(section, key, std::string("in expression \"") + text + "\": " + e.what());
    }
    return Expr();
  };
  auto check_index = [&](int i, const std::string& section, const std::string& key) {
    if (i < 1 || i > n) fail(section, key, "index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  };

  // Metric: entries given on one side of the diagonal are mirrored.
  if (spec.metric.empty()) fail("metric", "g_1_1", "metric has no entries");
  std::vector<ScalarField> g(static_cast<std::size_t>(n * n));
  std::vector<bool> given(static_cast<std::size_t>(n * n), false);
  for (const auto& [ij, text] : spec.metric) {
    const std::string key = "g_" + std::to_string(ij.first) + "_" + std::to_string(ij.second);
    check_index(ij.first, "metric", key);
    check_index(ij.second, "metric", key);
    const auto s = static_cast<std::size_t>((ij.first - 1) * n + (ij.second - 1));
    g[s] = ScalarField(expr(text, "metric", key));
    given[s] = true;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto s = static_cast<std::size_t>(i * n + j);
      const auto t = static_cast<std::size_t>(j * n + i);
      if (!given[s] && given[t]) g[s] = g[t];
    }
  }
  std::optional<Signature> signature;
  if (spec.signature) {
    if (spec.signature->first < 0 || spec.signature->second < 0 || spec.signature->first + spec.signature->second != n) {
      fail("scenario", "signature", "signature entries must be non-negative and sum to n");
    }
    signature = Signature{spec.signature->first, spec.signature->second};
  }
  GLMetric metric(DTensorField(n, 0, 2, std::move(g)), signature);

  // Nonlinear connection.
  std::optional<NonlinearConnection> nonlinear;
  if (spec.canonical_nonlinear) {
    if (!spec.nonlinear.empty()) fail("nonlinear", "canonical", "canonical cannot be combined with explicit N_j_i");
    if (!metric.is_y_independent()) fail("nonlinear", "canonical", "canonical N requires a y-independent metric");
  } else {
    std::vector<ScalarField> entries(static_cast<std::size_t>(n * n));
    for (const auto& [ji, text] : spec.nonlinear) {
      const std::string key = "N_" + std::to_string(ji.first) + "_" + std::to_string(ji.second);
      check_index(ji.first, "nonlinear", key);
      check_index(ji.second, "nonlinear", key);
      entries[static_cast<std::size_t>((ji.first - 1) * n + (ji.second - 1))] = ScalarField(expr(text, "nonlinear", key));
    }
    nonlinear.emplace(n, std::move(entries));
  }

  // Weyl anchor form.
  OneForm w(static_cast<std::size_t>(n), ScalarField::constant(0.0));
  for (const auto& [i, text] : spec.weyl) {
    const std::string key = "w_" + std::to_string(i);
    check_index(i, "weyl", key);
    Expr e = expr(text, "weyl", key);
    if (!e.is_x_only()) fail("weyl", key, "Weyl form components must depend on x only");
    w[static_cast<std::size_t>(i - 1)] = ScalarField(std::move(e));
  }

  DerivativeEngine engine =
      spec.engine == "fd" ? DerivativeEngine::central_fd(spec.fd_step) : DerivativeEngine::symbolic();
  engine.h0 = spec.fd_step;
  if (spec.engine != "symbolic" && spec.engine != "fd") fail("scenario", "engine", "engine must be symbolic or fd");

  Scenario s(spec.name, metric,
             nonlinear ? *nonlinear : canonical_N(metric, engine), std::move(w));
  s.canonical_nonlinear = spec.canonical_nonlinear;

  s.gauges.clear();
  s.gauge_labels.clear();
  const std::vector<std::string> gauges = spec.gauges.empty() ? std::vector<std::string>{"0"} : spec.gauges;
  for (const auto& text : gauges) {
    Expr e = expr(text, "gauges", "f");
    if (!e.is_x_only()) fail("gauges", "f", "gauge \"" + text + "\" depends on y");
    s.gauges.emplace_back(std::move(e));
    s.gauge_labels.push_back(text);
  }

  auto box = [&](const std::vector<std::pair<double, double>>& given_box, const char* key) {
    if (given_box.empty()) return std::vector<std::pair<double, double>>(static_cast<std::size_t>(n), {-1.0, 1.0});
    if (given_box.size() == 1) return std::vector<std::pair<double, double>>(static_cast<std::size_t>(n), given_box.front());
    if (static_cast<int>(given_box.size()) != n) fail("scenario", key, "expected one range or n ranges");
    return given_box;
  };
  s.box.x = box(spec.x_box, "x_box");
  s.box.y = box(spec.y_box, "y_box");

  for (const auto& text : spec.exclusions) {
    s.exclusions.fields.emplace_back(expr(text, "scenario", "exclusions"));
    s.exclusions.labels.push_back(text);
  }
  s.exclusions.margin = spec.exclusion_margin;

  s.engine = engine;
  s.points = spec.points;
  s.seed = spec.seed;
  s.tolerance = spec.tolerance;

  try {
    s.check_consistency();
  } catch (const std::invalid_argument& e) {
    fail("scenario", "name", e.what());
  }
  return s;
}

}  // namespace glweyl::cli
