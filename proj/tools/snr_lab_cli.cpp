// snr-lab: command-line front end over the C interface.
//
// Each subcommand turns its flags into a JSON config, hands it to snr_run,
// then writes the returned artifacts and report. Exit codes: 0 ok, 1 usage
// or config error, 2 an acceptance check failed.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "snrlab/snr_lab.h"

namespace {

using Json = nlohmann::json;

struct Common {
  std::uint64_t seed = 0;
  std::string out, report;
  bool json = false;
  unsigned threads = 0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--out", c.out, "Primary output file (directory for hunt)");
  app->add_option("--report", c.report, "Report path");
  app->add_flag("--json", c.json, "Print the JSON report to stdout");
  app->add_option("--threads", c.threads, "Worker cap (default: SNR_LAB_THREADS, then all cores)");
}

// Copies every option given on the command line into the config, so the
// manifest echoes exactly what the user asked for.
void collect(const CLI::App* app, Json& config) {
  for (const CLI::Option* opt : app->get_options()) {
    if (opt->count() == 0 || opt->get_single_name() == "help") continue;
    std::string key = opt->get_single_name();
    for (auto& ch : key)
      if (ch == '-') ch = '_';
    if (key == "json") continue;
    if (key == "no_fill") {
      config["fill"] = false;
      continue;
    }
    if (opt->get_expected_min() == 0) {
      config[key] = true;
      continue;
    }
    const std::string v = opt->as<std::string>();
    if (key == "seed" || key == "threads" || key == "samples" || key == "k" || key == "table_row" ||
        key == "density" || key == "probes")
      config[key] = std::stoull(v);
    else if (key == "tol_contain" || key == "tol_hausdorff" || key == "tol_defect")
      config[key] = std::stod(v);
    else
      config[key] = v;
  }
}

bool write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    std::cerr << "snr-lab: cannot write " << path << "\n";
    return false;
  }
  return true;
}

int execute(const std::string& subcommand, const Json& config, bool print_json) {
  char* raw = nullptr;
  const snr_status st = snr_run(subcommand.c_str(), config.dump().c_str(), &raw);
  if (st != SNR_OK) {
    std::cerr << "snr-lab " << subcommand << ": " << snr_last_error() << "\n";
    return 1;
  }
  const Json bundle = Json::parse(raw);
  snr_string_free(raw);
  for (const auto& a : bundle["artifacts"])
    if (!write_file(a["path"].get<std::string>(), a["content"].get<std::string>())) return 1;
  const std::string report_path = bundle["report_path"].get<std::string>();
  const std::string report = bundle["report_text"].get<std::string>();
  if (!report_path.empty() && !write_file(report_path, report)) return 1;
  if (print_json) {
    std::cout << report;
  } else {
    std::cout << subcommand << ": " << bundle["summary"].get<std::string>() << "\n";
    if (!report_path.empty()) std::cout << "report: " << report_path << "\n";
  }
  return bundle["exit_code"].get<int>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"snr-lab: numerical laboratory for spatial numerical ranges"};
  app.set_version_flag("--version", std::string(snr_version()));
  app.require_subcommand(1);

  Common c_est, c_orc, c_cmp, c_tab, c_wit, c_hunt;
  std::string s;
  std::size_t n = 0;
  double x = 0;
  bool b = false;

  auto* est = app.add_subcommand("estimate", "Estimate V_A(a) by sampling unit vectors and norming functionals");
  add_common(est, c_est);
  est->add_option("--algebra", s, "Algebra JSON file");
  est->add_option("--table-row", n, "Use a table algebra (1..35)")->check(CLI::Range(1, 35));
  est->add_option("--p", s, "Norm exponent for --table-row (1, 2, ..., inf)");
  est->add_option("--element", s, "Element a, e.g. \"1+1i,2\"")->required();
  est->add_option("--samples", n, "Unit vectors drawn (default 50000)");
  est->add_option("--k", n, "Functional grid resolution (default 64)");
  est->add_option("--strategy", s, "gaussian, structured or mixed");
  est->add_flag("--no-fill", b, "Keep only the extreme values of each V(a; x)");
  est->add_flag("--dump-functionals", b, "Also write the norming functionals of the first samples");

  auto* orc = app.add_subcommand("oracle", "Emit the exact region of a table row");
  add_common(orc, c_orc);
  orc->add_option("--table-row", n, "Row 1..35")->required()->check(CLI::Range(1, 35));
  orc->add_option("--p", s, "Norm exponent");
  orc->add_option("--element", s, "Element \"a1,a2\" (default 1+1i,2)");
  orc->add_option("--density", n, "Region sampling density (default 200)");

  auto* cmp = app.add_subcommand("compare", "Compare a cloud with a region");
  add_common(cmp, c_cmp);
  cmp->add_option("--cloud", s, "Cloud file (.csv or .json)")->required();
  cmp->add_option("--region", s, "Region JSON file")->required();
  cmp->add_option("--tol-contain", x, "Containment tolerance (default 1e-6)");
  cmp->add_option("--tol-hausdorff", x, "Hull Hausdorff tolerance (default 0.05)");
  cmp->add_option("--density", n, "Region sampling density (default 200)");

  auto* tab = app.add_subcommand("table", "Soundness and completeness sweep over the table rows");
  add_common(tab, c_tab);
  tab->add_option("--rows", s, "Rows, e.g. 1..35 or 1,4,7..9");
  tab->add_option("--p", s, "Exponents, e.g. 1,2,inf");
  tab->add_option("--element", s, "Element \"a1,a2\" (default 1+1i,2)");
  tab->add_option("--samples", n, "Unit vectors per row (default 50000)");
  tab->add_option("--k", n, "Functional grid resolution (default 64)");
  tab->add_option("--density", n, "Region sampling density (default 200)");
  tab->add_option("--probes", n, "Convexity defect probes (default 20000)");

  auto* wit = app.add_subcommand("witness", "Check a witness construction over a polar z-grid");
  add_common(wit, c_wit);
  wit->add_option("--case", s, "semigroup, volterra-discrete, l1-line or volterra-l1")->required();
  wit->add_option("--config", s, "Case JSON (defaults to a built-in instance)");
  wit->add_option("--z-grid", s, "Angles x radii (default 16x8)");

  auto* hunt = app.add_subcommand("hunt", "Randomized search for a non-convex SNR");
  add_common(hunt, c_hunt);
  hunt->add_option("--config", s, "Hunt config JSON");
  hunt->add_flag("--table-only", b, "Null calibration over the table algebras");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::pair<CLI::App*, Common*> subs[] = {{est, &c_est}, {orc, &c_orc}, {cmp, &c_cmp},
                                                {tab, &c_tab}, {wit, &c_wit}, {hunt, &c_hunt}};
  for (const auto& [sub, common] : subs) {
    if (!sub->parsed()) continue;
    Json config = Json::object();
    collect(sub, config);
    return execute(sub->get_name(), config, common->json);
  }
  return 1;
}
