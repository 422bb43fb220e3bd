#include "snrlab/pipelines.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <boost/version.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "digest.hpp"
#include "snrlab/detail/parallel.hpp"
#include "snrlab/detail/random.hpp"
#include "snrlab/oracles.hpp"
#include "snrlab/witnesses.hpp"

namespace snrlab {

namespace {

using io::Json;

constexpr const char* kVersion = "0.3.0";

// ---- Config access -------------------------------------------------------------

[[noreturn]] void bad(const std::string& field, const std::string& message) {
  throw SpecError("config '" + field + "': " + message);
}

struct Config {
  const Json& j;
  std::set<std::string> allowed;

  Config(const Json& json, std::set<std::string> keys) : j(json), allowed(std::move(keys)) {
    if (!j.is_object()) bad("", "expected an object");
    allowed.insert({"seed", "threads", "out", "report", "json"});
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.contains(it.key())) bad(it.key(), "not an option of this subcommand");
  }

  bool has(const char* key) const { return j.contains(key) && !j[key].is_null(); }

  std::string str(const char* key, std::string fallback = "") const {
    if (!has(key)) return fallback;
    if (!j[key].is_string()) bad(key, "expected a string");
    return j[key].get<std::string>();
  }
  std::uint64_t u64(const char* key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = j[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    if (v.is_string()) {
      const std::string s = v.get<std::string>();
      std::uint64_t out = 0;
      const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
      if (ec == std::errc() && p == s.data() + s.size()) return out;
    }
    bad(key, "expected a nonnegative integer");
  }
  double real(const char* key, double fallback) const {
    if (!has(key)) return fallback;
    if (!j[key].is_number()) bad(key, "expected a number");
    return j[key].get<double>();
  }
  bool flag(const char* key) const {
    if (!has(key)) return false;
    if (!j[key].is_boolean()) bad(key, "expected true or false");
    return j[key].get<bool>();
  }
  unsigned threads() const { return static_cast<unsigned>(u64("threads", 0)); }
  std::uint64_t seed() const { return u64("seed", 0); }
};

// ---- Manifest ------------------------------------------------------------------

struct Run {
  std::string subcommand;
  const Json& config;
  std::vector<std::pair<std::string, std::string>> inputs;  // path, digest
  RunResult result;

  std::string read(const std::string& path) {
    std::string text = io::read_file(path);
    inputs.emplace_back(path, detail::sha256_hex(text));
    return text;
  }

  void emit(std::string path, std::string content) { result.artifacts.push_back({std::move(path), std::move(content)}); }

  RunResult finish(Json results, bool pass, std::uint64_t seed) {
    Json manifest;
    manifest["subcommand"] = subcommand;
    manifest["config"] = config;
    manifest["seed"] = seed;
    manifest["versions"] = {{"snr_lab", kVersion},
                            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                          "." + std::to_string(EIGEN_MINOR_VERSION)},
                            {"boost", BOOST_LIB_VERSION},
                            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
    Json in = Json::array();
    for (const auto& [p, d] : inputs) in.push_back({{"path", p}, {"sha256", d}});
    manifest["inputs"] = std::move(in);
    Json out = Json::array();
    for (const auto& a : result.artifacts)
      out.push_back({{"path", a.path}, {"bytes", a.content.size()}, {"sha256", detail::sha256_hex(a.content)}});
    manifest["outputs"] = std::move(out);
    result.report = {{"manifest", std::move(manifest)}, {"results", std::move(results)}, {"pass", pass}};
    if (result.exit_code == 0 && !pass) result.exit_code = 2;
    return std::move(result);
  }
};

bool ends_with(const std::string& s, std::string_view suffix) { return s.size() >= suffix.size() && s.ends_with(suffix); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Algebra from --algebra or --table-row/--p.
AlgebraSpec load_algebra(Run& run, const Config& c, Json& source) {
  if (c.has("algebra")) {
    if (c.has("table_row")) bad("algebra", "give either an algebra file or a table row, not both");
    const std::string path = c.str("algebra");
    source = {{"algebra", path}};
    return io::algebra_from_json(io::parse_json(run.read(path), path));
  }
  if (!c.has("table_row")) bad("algebra", "missing; give an algebra file or a table row and p");
  const auto row = static_cast<int>(c.u64("table_row", 0));
  const Exponent p = Exponent::parse(c.str("p", "1"));
  source = {{"table_row", row}, {"p", io::exponent_to_json(p)}};
  return table_algebra(row, p);
}

std::vector<Complex> load_points(Run& run, const std::string& path) {
  const std::string text = run.read(path);
  if (ends_with(path, ".json")) return io::cloud_from_json(io::parse_json(text, path)).points;
  return io::points_from_csv(text);
}

double max_region_distance(const Region& region, std::span<const Complex> points, unsigned threads) {
  const std::size_t chunks = (points.size() + 1023) / 1024;
  std::vector<double> worst(chunks, 0.0);
  detail::parallel_chunks(chunks, detail::resolve_threads(threads), [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c)
      for (std::size_t i = c * 1024; i < std::min(points.size(), (c + 1) * 1024); ++i)
        worst[c] = std::max(worst[c], region_distance(region, points[i]));
  });
  return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
}

// ---- estimate --------------------------------------------------------------------

RunResult run_estimate(Run& run) {
  const Config c(run.config, {"algebra", "table_row", "p", "element", "samples", "k", "strategy", "fill",
                              "dump_functionals"});
  Json source;
  const AlgebraSpec algebra = load_algebra(run, c, source);
  if (!c.has("element")) bad("element", "missing");
  const Element a = io::parse_element(c.str("element"));
  if (a.dim() != algebra.dim()) bad("element", "has " + std::to_string(a.dim()) + " coordinates, the algebra " +
                                                std::to_string(algebra.dim()));
  EstimateOptions o;
  o.samples = c.u64("samples", 50000);
  o.resolution = c.u64("k", 64);
  o.seed = c.seed();
  o.strategy = parse_strategy(c.str("strategy", "mixed"));
  o.fill = c.has("fill") ? c.flag("fill") : true;
  o.threads = c.threads();
  if (o.samples == 0 || o.resolution == 0) bad("samples", "samples and k must be >= 1");
  const PointCloud cloud = estimate_snr(algebra, a, o);

  const double radius = numerical_radius(cloud);
  const double na = norm(algebra, a);
  const bool radius_ok = radius <= na * (1.0 + 1e-8);
  const HullPolygon hull = convex_hull(cloud.points);

  const std::string out = c.str("out");
  Json functionals;
  if (c.flag("dump_functionals")) {
    const SphereSampler sampler(o.strategy, o.seed);
    functionals = Json::array();
    for (std::size_t s = 0; s < std::min<std::size_t>(o.samples, 16); ++s) {
      const Element x = sampler.sample(algebra.norm, s);
      const FamilyOptions fo{o.resolution, o.budget, detail::mix_seed(o.seed, s, 0xfa)};
      Json hs = Json::array();
      for (const auto& h : norming_functionals(algebra.norm, x.coords, fo).samples())
        hs.push_back(io::points_to_json(h.coords));
      functionals.push_back({{"index", s}, {"x", io::points_to_json(x.coords)}, {"functionals", std::move(hs)}});
    }
  }
  if (!out.empty()) {
    run.emit(out, ends_with(out, ".json") ? io::cloud_to_json(cloud).dump(1) + "\n" : io::points_to_csv(cloud.points));
    if (!functionals.is_null()) run.emit(out + ".functionals.json", functionals.dump(1) + "\n");
    run.result.report_path = c.str("report", out + ".report.json");
  } else {
    run.result.report_path = c.str("report");
  }

  Json r = source;
  r["element"] = io::points_to_json(a.coords);
  r["algebra_fingerprint"] = cloud.meta.algebra;
  r["points"] = cloud.points.size();
  r["hull_vertices"] = io::points_to_json(hull.vertices());
  r["numerical_radius"] = radius;
  r["element_norm"] = na;
  r["radius_bound_ok"] = radius_ok;
  if (out.empty() && !functionals.is_null()) r["functionals"] = std::move(functionals);
  run.result.summary = std::to_string(cloud.points.size()) + " points, radius " + fmt("%.6g", radius) + " <= ||a|| " +
                       fmt("%.6g", na) + (radius_ok ? "" : " VIOLATED");
  return run.finish(Json::array({std::move(r)}), radius_ok, o.seed);
}

// ---- oracle ------------------------------------------------------------------------

RunResult run_oracle(Run& run) {
  const Config c(run.config, {"table_row", "p", "element", "density"});
  if (!c.has("table_row")) bad("table_row", "missing");
  const auto row = static_cast<int>(c.u64("table_row", 0));
  const Exponent p = Exponent::parse(c.str("p", "1"));
  const Element a = io::parse_element(c.str("element", "1+1i,2"));
  if (a.dim() != 2) bad("element", "table rows act on C^2; give two coordinates");
  const Region region = table_oracle(row, p, a[0], a[1]);
  const auto sample = region_sample(region, c.u64("density", 200));
  const double defect = convexity_defect(sample, DefectOptions{20000, c.seed()});

  const std::string out = c.str("out");
  if (!out.empty()) {
    run.emit(out, io::region_to_json(region).dump(1) + "\n");
    run.result.report_path = c.str("report", out + ".report.json");
  } else {
    run.result.report_path = c.str("report");
  }
  const TableRow& info = table_row(row);
  Json r{{"row", row},
         {"p", io::exponent_to_json(p)},
         {"product", info.product},
         {"norm", info.norm},
         {"region_formula", info.region},
         {"element", io::points_to_json(a.coords)},
         {"region", io::region_to_json(region)},
         {"sample_points", sample.size()},
         {"sample_defect", defect}};
  run.result.summary = std::string("row ") + std::to_string(row) + " p=" + p.to_string() + ": " + region_kind(region) +
                       ", sample defect " + fmt("%.4g", defect);
  return run.finish(Json::array({std::move(r)}), true, c.seed());
}

// ---- compare ---------------------------------------------------------------------

RunResult run_compare(Run& run) {
  const Config c(run.config, {"cloud", "region", "tol_contain", "tol_hausdorff", "density"});
  if (!c.has("cloud") || !c.has("region")) bad("cloud", "compare needs a cloud file and a region file");
  const std::string region_path = c.str("region");
  const auto points = load_points(run, c.str("cloud"));
  if (points.empty()) bad("cloud", "no points");
  const Region region = io::region_from_json(io::parse_json(run.read(region_path), region_path));
  const double tol_c = c.real("tol_contain", 1e-6), tol_h = c.real("tol_hausdorff", 0.05);

  const double outside = max_region_distance(region, points, c.threads());
  const auto sample = region_sample(region, c.u64("density", 200));
  const double hd = hull_hausdorff(convex_hull(points), convex_hull(sample));
  const bool pass = outside <= tol_c && hd <= tol_h;
  run.result.report_path = c.str("report", c.str("out"));
  Json r{{"cloud_points", points.size()},
         {"region_kind", region_kind(region)},
         {"max_distance_outside", outside},
         {"tol_contain", tol_c},
         {"contained", outside <= tol_c},
         {"hull_hausdorff", hd},
         {"tol_hausdorff", tol_h},
         {"close", hd <= tol_h},
         {"pass", pass}};
  run.result.summary = "outside " + fmt("%.3g", outside) + ", hull Hausdorff " + fmt("%.4g", hd) +
                       (pass ? ": match" : ": MISMATCH");
  return run.finish(Json::array({std::move(r)}), pass, c.seed());
}

// ---- table -------------------------------------------------------------------------

RunResult run_table(Run& run) {
  const Config c(run.config, {"rows", "p", "element", "samples", "k", "density", "probes", "tol_contain",
                              "tol_hausdorff", "tol_defect"});
  const std::vector<int> rows = parse_row_list(c.str("rows", "1..35"));
  const std::vector<Exponent> ps = parse_exponent_list(c.str("p", "1,2,inf"));
  const Element a = io::parse_element(c.str("element", "1+1i,2"));
  if (a.dim() != 2) bad("element", "table rows act on C^2; give two coordinates");
  EstimateOptions o;
  o.samples = c.u64("samples", 50000);
  o.resolution = c.u64("k", 64);
  o.seed = c.seed();
  o.threads = c.threads();
  const std::size_t density = c.u64("density", 200), probes = c.u64("probes", 20000);
  const double tol_c = c.real("tol_contain", 1e-6), tol_h = c.real("tol_hausdorff", 0.05),
               tol_d = c.real("tol_defect", 0.02);

  Json results = Json::array();
  bool all = true;
  std::size_t evaluated = 0, failed = 0;
  for (int row : rows)
    for (const auto& p : ps) {
      Json r{{"row", row}, {"p", io::exponent_to_json(p)}};
      if (!row_accepts(row, p)) {
        r["status"] = "skipped";
        r["reason"] = "the row's product is only submultiplicative under the l1 norm";
        results.push_back(std::move(r));
        continue;
      }
      const AlgebraSpec algebra = table_algebra(row, p);
      const PointCloud cloud = estimate_snr(algebra, a, o);
      const Region region = table_oracle(row, p, a[0], a[1]);
      const double outside = max_region_distance(region, cloud.points, o.threads);
      const auto sample = region_sample(region, density);
      const double hd = hull_hausdorff(convex_hull(cloud.points), convex_hull(sample));
      const double defect = convexity_defect(sample, DefectOptions{probes, o.seed});
      const double radius = numerical_radius(cloud), na = norm(algebra, a);
      const bool ok_i = outside <= tol_c, ok_ii = hd <= tol_h, ok_iii = defect <= tol_d,
                 ok_r = radius <= na * (1.0 + 1e-8);
      const bool pass = ok_i && ok_ii && ok_iii && ok_r;
      ++evaluated;
      if (!pass) ++failed;
      all = all && pass;
      r["status"] = pass ? "pass" : "fail";
      r["region_kind"] = region_kind(region);
      r["cloud_points"] = cloud.points.size();
      r["max_distance_outside"] = outside;
      r["hull_hausdorff"] = hd;
      r["oracle_defect"] = defect;
      r["numerical_radius"] = radius;
      r["element_norm"] = na;
      r["contained"] = ok_i;
      r["close"] = ok_ii;
      r["oracle_convex"] = ok_iii;
      r["radius_bound_ok"] = ok_r;
      results.push_back(std::move(r));
    }
  run.result.report_path = c.str("report", c.str("out"));
  run.result.summary = std::to_string(evaluated) + " (row, p) pairs, " + std::to_string(failed) + " failing";
  return run.finish(std::move(results), all, o.seed);
}

// ---- witness -----------------------------------------------------------------------

std::vector<std::tuple<double, double, double>> pieces_from(const Json& f) {
  if (!f.is_array() || f.empty()) bad("f", "expected a nonempty array of [lo, hi, value]");
  std::vector<std::tuple<double, double, double>> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::string field = "f[" + std::to_string(i) + "]";
    if (!f[i].is_array() || f[i].size() != 3 || !f[i][0].is_number() || !f[i][1].is_number() || !f[i][2].is_number())
      bad(field, "expected [lo, hi, value]");
    out.emplace_back(f[i][0].get<double>(), f[i][1].get<double>(), f[i][2].get<double>());
  }
  return out;
}

QuadSpec quad_from(const Json& cj) {
  QuadSpec q;
  if (cj.contains("quad")) {
    const std::string m = cj["quad"].is_string() ? cj["quad"].get<std::string>() : "";
    if (m == "exact") q.mode = QuadMode::exact;
    else if (m == "simpson") q.mode = QuadMode::simpson;
    else bad("quad", "expected \"exact\" or \"simpson\"");
  }
  if (cj.contains("panels")) {
    if (!cj["panels"].is_number_unsigned() || cj["panels"].get<std::size_t>() < 2) bad("panels", "expected an even integer >= 2");
    q.panels = cj["panels"].get<std::size_t>();
  }
  return q;
}

void check_keys(const Json& cj, std::set<std::string> keys) {
  if (!cj.is_object()) bad("case", "expected an object");
  for (auto it = cj.begin(); it != cj.end(); ++it)
    if (!keys.contains(it.key())) bad(it.key(), "unknown key for this witness case");
}

Json default_case(const std::string& name) {
  if (name == "semigroup")
    return {{"semigroup", {{"kind", "naturals"}, {"n", 40}}},
            {"weight", {{"default", 1.0}}},
            {"f", {{2, 1.0, 0.0}, {3, 1.0, 1.0}}},
            {"t", 1}};
  if (name == "volterra-discrete") return {{"f", {{1, 4, 1.0, 0.0}, {1, 3, 0.0, 0.5}}}};
  if (name == "l1-line") return {{"f", {{1.0, 1.5, 2.0}, {-3.0, -2.0, 1.0}}}, {"quad", "exact"}};
  if (name == "volterra-l1") return {{"f", {{0.25, 0.5, 3.0}, {0.5, 0.75, 1.0}}}, {"quad", "exact"}};
  bad("case", "unknown witness case '" + name + "'");
}

Json witness_entry(Complex z, const WitnessResult& w, double tol) {
  const bool pass = w.error() <= tol && w.functional_ok;
  return {{"z", io::complex_to_json(z)},
          {"value", io::complex_to_json(w.value)},
          {"expected", io::complex_to_json(w.expected)},
          {"error", w.error()},
          {"dual_norm", w.dual_norm},
          {"pairing", io::complex_to_json(w.pairing)},
          {"element_norm", w.element_norm},
          {"functional_ok", w.functional_ok},
          {"pass", pass}};
}

RunResult run_witness(Run& run) {
  const Config c(run.config, {"case", "config", "z_grid"});
  const std::string name = c.str("case", "semigroup");
  Json cj = default_case(name);
  if (c.has("config")) {
    const std::string path = c.str("config");
    cj = io::parse_json(run.read(path), path);
  }
  const auto [angles, radii] = parse_grid(c.str("z_grid", "16x8"));

  Json results = Json::array();
  bool all = true;
  double worst = 0.0;
  auto add = [&](Json e, double err) {
    all = all && e["pass"].get<bool>();
    worst = std::max(worst, err);
    results.push_back(std::move(e));
  };

  if (name == "semigroup") {
    check_keys(cj, {"semigroup", "weight", "f", "t", "allow_heavy_t"});
    const Json& sj = cj.at("semigroup");
    const std::string kind = sj.value("kind", "naturals");
    const auto n = sj.value("n", 40LL);
    const DiscreteSemigroup s = kind == "naturals"                ? DiscreteSemigroup::naturals(n)
                                : kind == "nonnegative_integers" ? DiscreteSemigroup::nonnegative_integers(n)
                                : kind == "right_zero"           ? DiscreteSemigroup::right_zero(n)
                                : kind == "rational_volterra"    ? DiscreteSemigroup::rational_volterra(n)
                                                                 : (bad("semigroup.kind", "unknown semigroup '" + kind + "'"),
                                                                    DiscreteSemigroup::naturals(1));
    const Json wj = cj.value("weight", Json::object());
    const double base = wj.value("default", 1.0);
    std::map<long long, double> special;
    for (const auto& e : wj.value("values", Json::array())) special[e.at(0).get<long long>()] = e.at(1).get<double>();
    const Weight weight = [base, special](long long u) {
      auto it = special.find(u);
      return it == special.end() ? base : it->second;
    };
    WeightedL1Element f;
    for (const auto& e : cj.at("f")) f.coeffs[e.at(0).get<long long>()] += Complex(e.at(1).get<double>(), e.at(2).get<double>());
    const auto t = cj.at("t").get<long long>();
    const SemigroupWitnessOptions opts{cj.value("allow_heavy_t", false)};
    for (Complex z : polar_grid(f.norm(weight), angles, radii, true)) {
      const auto w = semigroup_witness(s, weight, f, t, z, opts);
      add(witness_entry(z, w, 1e-9), w.error());
    }
  } else if (name == "volterra-discrete") {
    check_keys(cj, {"f"});
    std::vector<RationalAtom> atoms;
    double fnorm = 0.0;
    for (const auto& e : cj.at("f")) {
      atoms.push_back({e.at(0).get<long long>(), e.at(1).get<long long>(), Complex(e.at(2).get<double>(), e.at(3).get<double>())});
      fnorm += std::abs(atoms.back().value);
    }
    for (Complex z : polar_grid(fnorm, angles, radii, false)) {
      const auto vw = volterra_discrete_witness(atoms, z);
      Json e = witness_entry(z, vw.result, 1e-9);
      e["denominator"] = vw.denominator;
      e["t"] = {vw.t_num, vw.denominator};
      e["n0"] = vw.n0;
      add(std::move(e), vw.result.error());
    }
  } else {
    check_keys(cj, {"f", "quad", "panels", "a", "delta"});
    const StepFunction f = StepFunction::from_pieces(pieces_from(cj.at("f")));
    const QuadSpec q = quad_from(cj);
    const double tol = q.mode == QuadMode::exact ? 1e-9 : 1e-4;
    for (Complex z : polar_grid(1.0, angles, radii, true)) {
      const auto w = name == "l1-line" ? l1_line_witness(f, z, cj.value("a", 0.0), q)
                                       : volterra_l1_witness(f, z, cj.value("delta", 0.0), q);
      add(witness_entry(z, w, tol), w.error());
    }
  }
  run.result.report_path = c.str("report", c.str("out"));
  run.result.summary = name + ": " + std::to_string(results.size()) + " grid points, max error " + fmt("%.3g", worst) +
                       (all ? "" : ", FAILING");
  return run.finish(std::move(results), all, c.seed());
}

// ---- hunt --------------------------------------------------------------------------

Json identity_json(const std::optional<DetectedIdentity>& id) {
  if (!id) return nullptr;
  return {{"element", io::points_to_json(id->element.coords)}, {"norm", id->norm}};
}

RunResult run_hunt(Run& run) {
  const Config c(run.config, {"config", "table_only"});
  HuntConfig h;
  if (c.has("config")) {
    const std::string path = c.str("config");
    h = io::hunt_config_from_json(io::parse_json(run.read(path), path));
  }
  if (c.has("seed")) h.seed = c.seed();
  if (c.has("threads")) h.threads = c.threads();
  if (c.has("table_only")) h.table_only = c.flag("table_only");
  const HuntSummary s = hunt_nonconvex(h);

  const std::string out = c.str("out");
  const std::string dir = out.empty() || out.ends_with('/') ? out : out + "/";
  Json results = Json::array();
  Json hist = Json::array();
  for (std::size_t b = 0; b < s.histogram.size(); ++b) {
    const double hi = s.histogram_edges[b + 1];
    hist.push_back({{"lo", s.histogram_edges[b]}, {"hi", std::isinf(hi) ? Json("inf") : Json(hi)}, {"count", s.histogram[b]}});
  }
  results.push_back({{"type", "summary"},
                     {"hunt_config", io::hunt_config_to_json(h)},
                     {"drawn", s.drawn},
                     {"zero_tensors", s.zero_tensors},
                     {"associative", s.associative},
                     {"evaluated_elements", s.evaluated_elements},
                     {"unital_norm_one", s.unital_norm_one},
                     {"above_threshold", s.above_threshold},
                     {"faded_on_recheck", s.faded_on_recheck},
                     {"artifacts_rejected", s.artifacts_rejected},
                     {"survivors", s.survivors.size()},
                     {"max_defect", s.max_defect},
                     {"defect_histogram", std::move(hist)}});
  for (std::size_t rank = 0; rank < s.survivors.size(); ++rank) {
    const HuntReport& r = s.survivors[rank];
    Json e{{"type", "survivor"},
           {"rank", rank},
           {"candidate", r.candidate},
           {"element_index", r.element_index},
           {"table_row", r.table_row},
           {"algebra", io::algebra_to_json(r.algebra)},
           {"element", io::points_to_json(r.element.coords)},
           {"defect", r.defect},
           {"initial_defect", r.initial_defect},
           {"associativity_residual", r.associativity_residual},
           {"scale", r.scale},
           {"identity", identity_json(r.identity)},
           {"unital_norm_one", r.unital_norm_one},
           {"estimate_seed", r.estimate_seed},
           {"defect_seed", r.defect_seed}};
    if (!out.empty()) {
      char name[48];
      std::snprintf(name, sizeof name, "survivor_%04zu.json", rank);
      Json full = e;
      full["cloud"] = io::cloud_to_json(r.cloud);
      run.emit(dir + name, full.dump(1) + "\n");
      e["file"] = dir + name;
    }
    results.push_back(std::move(e));
  }
  run.result.report_path = c.str("report", out.empty() ? "" : dir + "summary.json");
  run.result.summary = std::to_string(s.drawn) + " candidates, " + std::to_string(s.associative) + " associative, " +
                       std::to_string(s.evaluated_elements) + " elements, max defect " + fmt("%.4g", s.max_defect) +
                       ", " + std::to_string(s.survivors.size()) + " survivors";
  return run.finish(std::move(results), true, h.seed);
}

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size())
    throw SpecError("cannot parse row list '" + std::string(whole) + "'");
  return v;
}

}  // namespace

std::vector<int> parse_row_list(std::string_view text) {
  std::vector<int> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == text.npos) comma = text.size();
    const std::string_view item = text.substr(start, comma - start);
    const std::size_t dots = item.find("..");
    const int lo = parse_int(item.substr(0, dots), text);
    const int hi = dots == item.npos ? lo : parse_int(item.substr(dots + 2), text);
    if (lo < 1 || hi > kTableRows || lo > hi) throw SpecError("rows must lie in 1..35: '" + std::string(text) + "'");
    for (int r = lo; r <= hi; ++r)
      if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
    start = comma + 1;
  }
  return out;
}

std::vector<Exponent> parse_exponent_list(std::string_view text) {
  std::vector<Exponent> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == text.npos) comma = text.size();
    out.push_back(Exponent::parse(std::string(text.substr(start, comma - start))));
    start = comma + 1;
  }
  return out;
}

std::pair<std::size_t, std::size_t> parse_grid(std::string_view text) {
  const std::size_t x = text.find('x');
  if (x == text.npos) throw SpecError("grid must look like 16x8");
  const int a = parse_int(text.substr(0, x), text), r = parse_int(text.substr(x + 1), text);
  if (a < 1 || r < 1) throw SpecError("grid sizes must be >= 1");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(r)};
}

std::string library_version() { return kVersion; }

RunResult run_pipeline(std::string_view subcommand, const io::Json& config) {
  Run run{std::string(subcommand), config, {}, {}};
  try {
    if (subcommand == "estimate") return run_estimate(run);
    if (subcommand == "oracle") return run_oracle(run);
    if (subcommand == "compare") return run_compare(run);
    if (subcommand == "table") return run_table(run);
    if (subcommand == "witness") return run_witness(run);
    if (subcommand == "hunt") return run_hunt(run);
  } catch (const io::Json::exception& e) {
    throw SpecError(std::string("config: ") + e.what());
  }
  throw SpecError("unknown subcommand '" + std::string(subcommand) + "'");
}

}  // namespace snrlab
