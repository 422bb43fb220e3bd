#include "snrlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace snrlab::io {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw SpecError("field '" + field + "': " + message);
}

const Json& need(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) field_error(field, "must be finite");
  return v;
}

std::uint64_t unsigned_number(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  field_error(field, "expected a nonnegative integer");
}

void reject_unknown(const Json& j, const std::set<std::string>& known, const std::string& path) {
  if (!j.is_object()) field_error(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.contains(it.key())) field_error(join(path, it.key()), "unknown key");
}

double parse_real(std::string_view s, std::string_view whole) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
    throw SpecError("cannot parse complex number '" + std::string(whole) + "'");
  return v;
}

Json norm_to_json(const NormSpec& n) { return Json{{"p", exponent_to_json(n.p)}, {"weights", n.weights}, {"scale", n.scale}}; }

NormSpec norm_from_json(const Json& j, const std::string& path, std::size_t dim) {
  reject_unknown(j, {"p", "weights", "scale"}, path);
  NormSpec n;
  n.p = exponent_from_json(need(j, "p", path), join(path, "p"));
  if (auto it = j.find("weights"); it != j.end()) {
    if (!it->is_array()) field_error(join(path, "weights"), "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) n.weights.push_back(number((*it)[i], at(join(path, "weights"), i)));
  } else {
    n.weights.assign(dim, 1.0);
  }
  if (auto it = j.find("scale"); it != j.end()) n.scale = number(*it, join(path, "scale"));
  return n;
}

}  // namespace

Complex parse_complex(std::string_view text) {
  if (text.empty()) throw SpecError("empty complex number");
  if (text.back() != 'i') return {parse_real(text, text), 0.0};
  const std::string_view body = text.substr(0, text.size() - 1);
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  const std::string_view re = split == std::string_view::npos ? std::string_view{} : body.substr(0, split);
  const std::string_view im = split == std::string_view::npos ? body : body.substr(split);
  double imag;
  if (im.empty() || im == "+") imag = 1.0;
  else if (im == "-") imag = -1.0;
  else imag = parse_real(im, text);
  return {re.empty() ? 0.0 : parse_real(re, text), imag};
}

Element parse_element(std::string_view text) {
  Element out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = text.find(',', start);
    out.coords.push_back(parse_complex(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(Complex z) {
  std::string out = format_real(z.real());
  const std::string im = format_real(z.imag());
  if (im.front() != '-') out += '+';
  return out + im + "i";
}

Json parse_json(std::string_view text, std::string_view what) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SpecError(std::string(what) + ": line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": malformed JSON");
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (!j.is_array() || j.size() != 2) field_error(field, "expected [re, im]");
  return {number(j[0], at(field, 0)), number(j[1], at(field, 1))};
}

Json points_to_json(const std::vector<Complex>& points) {
  Json out = Json::array();
  for (const auto& z : points) out.push_back(complex_to_json(z));
  return out;
}

std::vector<Complex> points_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of [re, im]");
  std::vector<Complex> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], at(field, i)));
  return out;
}

Json exponent_to_json(const Exponent& p) {
  if (p.is_infinite()) return "inf";
  return p.value();
}

Exponent exponent_from_json(const Json& j, const std::string& field) {
  try {
    if (j.is_string()) return Exponent::parse(j.get<std::string>());
    return Exponent::finite(number(j, field));
  } catch (const SpecError& e) {
    if (std::string_view(e.what()).starts_with("field")) throw;
    field_error(field, e.what());
  }
}

Json algebra_to_json(const AlgebraSpec& a) {
  const std::size_t n = a.dim();
  Json tensor = Json::array();
  for (std::size_t k = 0; k < n; ++k) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < n; ++i) {
      Json row = Json::array();
      for (std::size_t j = 0; j < n; ++j) row.push_back(complex_to_json(a.tensor(i, j, k)));
      rows.push_back(std::move(row));
    }
    tensor.push_back(std::move(rows));
  }
  Json out{{"dim", n}, {"tensor", std::move(tensor)}};
  if (const auto* single = std::get_if<NormSpec>(&a.norm)) {
    out["norm"] = norm_to_json(*single);
  } else {
    Json blocks = Json::array();
    for (const auto& b : std::get<SumNorm>(a.norm).blocks) blocks.push_back(norm_to_json(b));
    out["norm"] = Json{{"blocks", std::move(blocks)}};
  }
  if (a.identity) out["identity"] = points_to_json(a.identity->element.coords);
  return out;
}

AlgebraSpec algebra_from_json(const Json& j) {
  if (!j.is_object()) field_error("", "algebra must be a JSON object");
  reject_unknown(j, {"dim", "tensor", "norm", "identity"}, "");
  const std::uint64_t n = unsigned_number(need(j, "dim", ""), "dim");
  if (n == 0 || n > 64) field_error("dim", "must be in 1..64");
  const Json& tj = need(j, "tensor", "");
  if (!tj.is_array() || tj.size() != n) field_error("tensor", "expected dim k-slices");
  StructureTensor t(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::string fk = at("tensor", k);
    if (!tj[k].is_array() || tj[k].size() != n) field_error(fk, "expected dim rows");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string fi = at(fk, i);
      if (!tj[k][i].is_array() || tj[k][i].size() != n) field_error(fi, "expected dim entries");
      for (std::size_t jj = 0; jj < n; ++jj) t.set(i, jj, k, complex_from_json(tj[k][i][jj], at(fi, jj)));
    }
  }
  AlgebraSpec a;
  a.tensor = std::move(t);
  const Json& nj = need(j, "norm", "");
  if (nj.is_object() && nj.contains("blocks")) {
    reject_unknown(nj, {"blocks"}, "norm");
    const Json& bj = nj["blocks"];
    if (!bj.is_array() || bj.empty()) field_error("norm.blocks", "expected a nonempty array");
    SumNorm s;
    for (std::size_t b = 0; b < bj.size(); ++b) s.blocks.push_back(norm_from_json(bj[b], at("norm.blocks", b), 0));
    a.norm = std::move(s);
  } else {
    a.norm = norm_from_json(nj, "norm", n);
  }
  if (norm_dim(a.norm) != n) field_error("norm", "dimension does not match dim");
  if (auto it = j.find("identity"); it != j.end() && !it->is_null()) {
    Element e(points_from_json(*it, "identity"));
    if (e.dim() != n) field_error("identity", "dimension does not match dim");
    const double en = norm_value(a.norm, e.view());
    a.identity = Identity{std::move(e), std::abs(en - 1.0) <= 1e-12};
  }
  try {
    a.validate();
  } catch (const SpecError& e) {
    field_error("algebra", e.what());
  }
  return a;
}

Json region_to_json(const Region& region) {
  return std::visit(
      [](const auto& r) -> Json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PointRegion>) {
          return {{"kind", "point"}, {"z", complex_to_json(r.z)}};
        } else if constexpr (std::is_same_v<T, Segment>) {
          return {{"kind", "segment"}, {"from", complex_to_json(r.from)}, {"to", complex_to_json(r.to)}};
        } else if constexpr (std::is_same_v<T, Disk>) {
          return {{"kind", "disk"}, {"center", complex_to_json(r.center)}, {"radius", r.radius}};
        } else if constexpr (std::is_same_v<T, Minkowski>) {
          return {{"kind", "minkowski"}, {"translate", complex_to_json(r.translate)}, {"scale", complex_to_json(r.scale)}};
        } else if constexpr (std::is_same_v<T, FiniteHull>) {
          return {{"kind", "finite_hull"}, {"generators", points_to_json(r.generators)}};
        } else {
          return {{"kind", "param"},
                  {"name", r.name},
                  {"center0", complex_to_json(r.center0)},
                  {"center1", complex_to_json(r.center1)},
                  {"spin0", complex_to_json(r.spin0)},
                  {"spin1", complex_to_json(r.spin1)},
                  {"alpha", r.alpha},
                  {"beta", r.beta}};
        }
      },
      region);
}

Region region_from_json(const Json& j) {
  if (!j.is_object()) field_error("", "region must be a JSON object");
  const Json& kj = need(j, "kind", "");
  if (!kj.is_string()) field_error("kind", "expected a string");
  const std::string kind = kj.get<std::string>();
  Region out;
  if (kind == "point") {
    reject_unknown(j, {"kind", "z"}, "");
    out = PointRegion{complex_from_json(need(j, "z", ""), "z")};
  } else if (kind == "segment") {
    reject_unknown(j, {"kind", "from", "to"}, "");
    out = Segment{complex_from_json(need(j, "from", ""), "from"), complex_from_json(need(j, "to", ""), "to")};
  } else if (kind == "disk") {
    reject_unknown(j, {"kind", "center", "radius"}, "");
    out = Disk{complex_from_json(need(j, "center", ""), "center"), number(need(j, "radius", ""), "radius")};
  } else if (kind == "minkowski") {
    reject_unknown(j, {"kind", "translate", "scale"}, "");
    out = Minkowski{complex_from_json(need(j, "translate", ""), "translate"),
                    complex_from_json(need(j, "scale", ""), "scale")};
  } else if (kind == "finite_hull") {
    reject_unknown(j, {"kind", "generators"}, "");
    out = FiniteHull{points_from_json(need(j, "generators", ""), "generators")};
  } else if (kind == "param") {
    reject_unknown(j, {"kind", "name", "center0", "center1", "spin0", "spin1", "alpha", "beta"}, "");
    Param p;
    if (auto it = j.find("name"); it != j.end()) {
      if (!it->is_string()) field_error("name", "expected a string");
      p.name = it->get<std::string>();
    }
    p.center0 = complex_from_json(need(j, "center0", ""), "center0");
    p.center1 = complex_from_json(need(j, "center1", ""), "center1");
    p.spin0 = complex_from_json(need(j, "spin0", ""), "spin0");
    p.spin1 = complex_from_json(need(j, "spin1", ""), "spin1");
    p.alpha = number(need(j, "alpha", ""), "alpha");
    p.beta = number(need(j, "beta", ""), "beta");
    out = std::move(p);
  } else {
    field_error("kind", "unknown region kind '" + kind + "'");
  }
  try {
    validate_region(out);
  } catch (const SpecError& e) {
    field_error("region", e.what());
  }
  return out;
}

Json cloud_to_json(const PointCloud& cloud) {
  const auto& m = cloud.meta;
  return {{"meta",
           {{"algebra", m.algebra},
            {"samples", m.samples},
            {"resolution", m.resolution},
            {"seed", m.seed},
            {"strategy", to_string(m.strategy)},
            {"element_norm", m.element_norm}}},
          {"points", points_to_json(cloud.points)}};
}

PointCloud cloud_from_json(const Json& j) {
  if (!j.is_object()) field_error("", "cloud must be a JSON object");
  PointCloud c;
  c.points = points_from_json(need(j, "points", ""), "points");
  if (auto it = j.find("meta"); it != j.end()) {
    const Json& m = *it;
    if (!m.is_object()) field_error("meta", "expected an object");
    if (m.contains("algebra") && m["algebra"].is_string()) c.meta.algebra = m["algebra"].get<std::string>();
    if (m.contains("samples")) c.meta.samples = unsigned_number(m["samples"], "meta.samples");
    if (m.contains("resolution")) c.meta.resolution = unsigned_number(m["resolution"], "meta.resolution");
    if (m.contains("seed")) c.meta.seed = unsigned_number(m["seed"], "meta.seed");
    if (m.contains("strategy") && m["strategy"].is_string())
      c.meta.strategy = parse_strategy(m["strategy"].get<std::string>());
    if (m.contains("element_norm")) c.meta.element_norm = number(m["element_norm"], "meta.element_norm");
  }
  return c;
}

std::string points_to_csv(const std::vector<Complex>& points) {
  std::string out = "re,im\n";
  out.reserve(points.size() * 48);
  for (const auto& z : points) {
    out += format_real(z.real());
    out += ',';
    out += format_real(z.imag());
    out += '\n';
  }
  return out;
}

std::vector<Complex> points_from_csv(std::string_view text) {
  std::vector<Complex> out;
  std::size_t line_no = 0, start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == text.npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "re,im") throw SpecError("csv line 1: expected header 're,im'");
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == line.npos) throw SpecError("csv line " + std::to_string(line_no) + ": expected re,im");
    try {
      out.emplace_back(parse_real(line.substr(0, comma), line), parse_real(line.substr(comma + 1), line));
    } catch (const SpecError&) {
      throw SpecError("csv line " + std::to_string(line_no) + ": cannot parse '" + std::string(line) + "'");
    }
  }
  if (line_no == 0) throw SpecError("csv is empty");
  return out;
}

Json hunt_config_to_json(const HuntConfig& c) {
  Json ps = Json::array();
  for (const auto& p : c.p_choices) ps.push_back(exponent_to_json(p));
  return {{"dim", c.dim},
          {"pool", c.pool == CoefficientPool::integer ? "integer" : "real"},
          {"coef_lo", c.coef_lo},
          {"coef_hi", c.coef_hi},
          {"sparsity", c.sparsity},
          {"p_choices", std::move(ps)},
          {"elements_per_algebra", c.elements_per_algebra},
          {"samples", c.samples},
          {"resolution", c.resolution},
          {"probes", c.probes},
          {"threshold", c.threshold},
          {"seed", c.seed},
          {"budget", c.budget},
          {"scale_samples", c.scale_samples},
          {"recheck_factor", c.recheck_factor},
          {"table_only", c.table_only},
          {"threads", c.threads}};
}

HuntConfig hunt_config_from_json(const Json& j) {
  if (!j.is_object()) field_error("", "hunt config must be a JSON object");
  reject_unknown(j,
                 {"dim", "pool", "coef_lo", "coef_hi", "sparsity", "p_choices", "elements_per_algebra", "samples",
                  "resolution", "probes", "threshold", "seed", "budget", "scale_samples", "recheck_factor",
                  "table_only", "threads"},
                 "");
  HuntConfig c;
  auto size = [&](const char* key, std::size_t& dst) {
    if (auto it = j.find(key); it != j.end()) dst = unsigned_number(*it, key);
  };
  auto integer = [&](const char* key, int& dst) {
    if (auto it = j.find(key); it != j.end()) {
      if (!it->is_number_integer()) field_error(key, "expected an integer");
      dst = it->get<int>();
    }
  };
  size("dim", c.dim);
  if (auto it = j.find("pool"); it != j.end()) {
    const std::string v = it->is_string() ? it->get<std::string>() : "";
    if (v == "integer") c.pool = CoefficientPool::integer;
    else if (v == "real") c.pool = CoefficientPool::real;
    else field_error("pool", "expected \"integer\" or \"real\"");
  }
  integer("coef_lo", c.coef_lo);
  integer("coef_hi", c.coef_hi);
  size("sparsity", c.sparsity);
  if (auto it = j.find("p_choices"); it != j.end()) {
    if (!it->is_array()) field_error("p_choices", "expected an array");
    c.p_choices.clear();
    for (std::size_t i = 0; i < it->size(); ++i) c.p_choices.push_back(exponent_from_json((*it)[i], at("p_choices", i)));
  }
  size("elements_per_algebra", c.elements_per_algebra);
  size("samples", c.samples);
  size("resolution", c.resolution);
  size("probes", c.probes);
  if (auto it = j.find("threshold"); it != j.end()) c.threshold = number(*it, "threshold");
  if (auto it = j.find("seed"); it != j.end()) c.seed = unsigned_number(*it, "seed");
  size("budget", c.budget);
  size("scale_samples", c.scale_samples);
  size("recheck_factor", c.recheck_factor);
  if (auto it = j.find("table_only"); it != j.end()) {
    if (!it->is_boolean()) field_error("table_only", "expected true or false");
    c.table_only = it->get<bool>();
  }
  if (auto it = j.find("threads"); it != j.end()) c.threads = static_cast<unsigned>(unsigned_number(*it, "threads"));
  try {
    c.validate();
  } catch (const SpecError& e) {
    field_error("hunt", e.what());
  }
  return c;
}

}  // namespace snrlab::io
