// pairlab command line: scenario-driven verification runs with
// machine-readable reports and plot-data extraction.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pairlab/scenario.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pairlab;

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  std::cerr << "config error: " << msg << "\n";
  std::exit(2);
}

// ---------------------------------------------------------------------------
// scene parsing (closed analytic family; anything else is rejected here)
// ---------------------------------------------------------------------------

Vec2 parse_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2)
    config_error(where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Poly2 parse_poly(const json& j, const std::string& where) {
  if (j.is_number()) return Poly2(j.get<double>());
  if (!j.contains("coeffs")) config_error(where + ": polynomial needs coeffs");
  Poly2 p;
  const auto& rows = j["coeffs"];
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t k = 0; k < rows[i].size(); ++k)
      p.set(int(i), int(k), rows[i][k].get<double>());
  return p;
}

FinitePerimeterSet parse_set(const json& j, const std::string& where) {
  if (!j.contains("type")) config_error(where + ": set needs a type");
  std::string type = j["type"].get<std::string>();
  try {
    if (type == "halfplane")
      return FinitePerimeterSet::half_plane(parse_vec(j.at("normal"), where),
                                            j.at("offset").get<double>());
    if (type == "disc")
      return FinitePerimeterSet::disc(parse_vec(j.at("center"), where),
                                      j.at("radius").get<double>());
    if (type == "box")
      return FinitePerimeterSet::box(parse_vec(j.at("lo"), where),
                                     parse_vec(j.at("hi"), where));
    if (type == "polygon") {
      std::vector<Vec2> vs;
      for (const auto& v : j.at("vertices")) vs.push_back(parse_vec(v, where));
      return FinitePerimeterSet::polygon(std::move(vs));
    }
    if (type == "product1d") {
      std::vector<std::pair<double, double>> iv;
      for (const auto& p : j.at("intervals"))
        iv.push_back({p[0].get<double>(), p[1].get<double>()});
      int axis = j.at("axis").get<int>();
      if (axis != 1 && axis != 2)
        config_error(where + ": product1d axis must be 1 or 2");
      return FinitePerimeterSet::product1d(IntervalUnion(std::move(iv)),
                                           axis - 1);
    }
    if (type == "union" || type == "intersection" || type == "difference") {
      BoolOp op = type == "union" ? BoolOp::Union
                  : type == "intersection" ? BoolOp::Intersection
                                           : BoolOp::Difference;
      return FinitePerimeterSet::boolean(op, parse_set(j.at("lhs"), where),
                                         parse_set(j.at("rhs"), where));
    }
  } catch (const json::exception& e) {
    config_error(where + ": " + e.what());
  } catch (const Error& e) {
    config_error(where + ": " + e.what());
  }
  config_error(where + ": unknown set type '" + type + "'");
}

Probe parse_probe(const json& j, const std::string& where) {
  std::string type = j.at("type").get<std::string>();
  if (type == "ball")
    return BallProbe{parse_vec(j.at("center"), where), j.at("r").get<double>()};
  if (type == "box")
    return BoxProbe{parse_vec(j.at("lo"), where), parse_vec(j.at("hi"), where)};
  if (type == "cylinder")
    return CylinderProbe{parse_vec(j.at("center"), where),
                         parse_vec(j.at("axis"), where), j.at("r").get<double>(),
                         j.at("rho").get<double>()};
  if (type == "halfball")
    return HalfBallProbe{parse_vec(j.at("center"), where), j.at("r").get<double>(),
                         parse_vec(j.at("normal"), where),
                         j.value("side", "i") == std::string("e")
                             ? HalfBallSide::Exterior
                             : HalfBallSide::Interior};
  config_error(where + ": unknown probe type '" + type + "'");
}

DMField parse_field(const json& j, const FinitePerimeterSet& domain) {
  Vec2Poly smooth;
  if (j.contains("smooth")) {
    smooth.x = parse_poly(j["smooth"].value("x", json(0.0)), "field.smooth.x");
    smooth.y = parse_poly(j["smooth"].value("y", json(0.0)), "field.smooth.y");
  }
  std::vector<JumpTerm> terms;
  if (j.contains("jumps")) {
    for (const auto& t : j["jumps"]) {
      Poly2 q = t.contains("modulation")
                    ? parse_poly(t["modulation"], "field.jumps.modulation")
                    : Poly2(1.0);
      terms.push_back(JumpTerm{parse_vec(t.at("coef"), "field.jumps.coef"),
                               parse_set(t.at("region"), "field.jumps.region"),
                               q});
    }
  }
  return DMField(smooth, std::move(terms), domain);
}

BVFunction parse_bv(const json& j, const FinitePerimeterSet& domain) {
  std::string type = j.at("type").get<std::string>();
  if (type == "characteristic")
    return BVFunction::characteristic(parse_set(j.at("set"), "bv.set"), domain);
  if (type == "smooth")
    return BVFunction::smooth(parse_poly(j.at("poly"), "bv.poly"), domain);
  if (type == "piecewise") {
    std::vector<BVPiece> pieces;
    for (const auto& p : j.at("pieces"))
      pieces.push_back({parse_set(p.at("region"), "bv.pieces.region"),
                        parse_poly(p.at("value"), "bv.pieces.value")});
    return BVFunction::piecewise(std::move(pieces), domain);
  }
  if (type == "staircase") {
    int axis = j.value("axis", 1);
    if (axis != 1 && axis != 2) config_error("bv.axis must be 1 or 2");
    return BVFunction::staircase(j.at("lambda").get<double>(),
                                 j.at("depth").get<int>(), axis - 1, domain);
  }
  config_error("unknown bv type '" + type + "'");
}

RadiusSchedule parse_schedule(const json& j) {
  RadiusSchedule sched;
  if (j.contains("schedules")) {
    const auto& s = j["schedules"];
    sched.r0 = s.value("r0", sched.r0);
    sched.q = s.value("q", sched.q);
    sched.n = s.value("n", sched.n);
    sched.rho0 = s.value("rho0", sched.rho0);
    sched.q_rho = s.value("q_rho", sched.q_rho);
    sched.n_rho = s.value("n_rho", sched.n_rho);
    sched.couple_scale = s.value("couple_scale", sched.couple_scale);
  }
  try {
    sched.validate();
  } catch (const Error& e) {
    config_error(e.what());
  }
  return sched;
}

// ---------------------------------------------------------------------------
// custom-scene tasks
// ---------------------------------------------------------------------------

ScenarioReport run_custom(const json& cfg, double ts,
                          const RadiusSchedule& sched) {
  const json& scene = cfg.at("scene");
  FinitePerimeterSet domain = parse_set(scene.at("domain"), "scene.domain");
  DMField field = parse_field(scene.value("field", json::object()), domain);
  ScenarioReport rep;
  rep.name = "custom";
  std::string task = cfg.value("task", "traces");

  auto add = [&](const std::string& id, double v, double thr,
                 const std::string& note) {
    CheckRecord r{id, v, thr, std::abs(v) <= thr, note};
    rep.pass = rep.pass && r.pass;
    rep.records.push_back(std::move(r));
  };

  if (task == "traces") {
    Table t;
    t.columns = {"x", "y", "tr_plus", "tr_minus", "tr_star", "cyl"};
    for (const auto& pj : scene.at("points")) {
      Vec2 p = parse_vec(pj.at("at"), "points.at");
      Vec2 nu = parse_vec(pj.at("normal"), "points.normal");
      auto tr = halfball_traces(field, p, nu, sched);
      auto cy = cyl_trace(field, p, nu, sched);
      t.rows.push_back(
          {p.x, p.y, tr.plus.value, tr.minus.value, tr.star, cy.outer.value});
      add("converged-" + std::to_string(t.rows.size()),
          tr.plus.converged && tr.minus.converged ? 0.0 : 1.0, 0.5,
          "half-ball trace convergence");
    }
    rep.tables["traces"] = t;
    return rep;
  }
  BVFunction u = parse_bv(scene.at("bv"), domain);
  if (task == "gauss-green") {
    FinitePerimeterSet e = parse_set(cfg.at("set"), "set");
    std::string v = cfg.value("variant", "interior");
    std::string m = cfg.value("method", "analytic");
    auto ledger = gauss_green(
        field, u, e, v == "closure" ? GGVariant::Closure : GGVariant::Interior,
        m == "halfball"   ? TraceMethod::HalfBall
        : m == "cylinder" ? TraceMethod::Cylinder
                          : TraceMethod::Analytic,
        sched);
    add("gauss-green-residual", ledger.residual,
        cfg.value("threshold", 1e-6) * ts, "ledger residual");
    Table t;
    t.columns = {"volume", "pairing", "boundary", "residual"};
    t.rows.push_back(
        {ledger.volume, ledger.pairing, ledger.boundary, ledger.residual});
    rep.tables["ledger"] = t;
    return rep;
  }
  if (task == "pairing") {
    TestFunction phi = TestFunction::tensor_mollifier(
        parse_vec(cfg.value("phi_center", json::array({0.0, 0.0})), "phi"),
        cfg.value("phi_radius", 1.0), cfg.value("phi_order", 3));
    double lhs = pairing_distributional(field, u, phi);
    double rhs = pair_test(pairing_analytic(field, u), phi);
    add("method-agreement", lhs - rhs, cfg.value("threshold", 1e-5) * ts,
        "distributional vs analytic pairing");
    return rep;
  }
  if (task == "coarea") {
    EvalWindow w = cfg.contains("window")
                       ? EvalWindow{parse_probe(cfg["window"], "window")}
                       : EvalWindow{domain};
    auto c = coarea_pairing_check(field, u, w, cfg.value("t_nodes", 64));
    add("coarea-residual", c.residual, cfg.value("threshold", 1e-3) * ts, "");
    return rep;
  }
  if (task == "tangent") {
    Vec2 x = parse_vec(cfg.at("at"), "at");
    auto chk = tangent_blowup_check(field, u, x, cfg.value("alpha", 1.0), sched,
                                    default_gap_suite());
    add("final-gap", chk.final_gap, cfg.value("threshold", 1e-3) * ts, "");
    Table t;
    t.columns = {"radius", "gap"};
    for (auto& [r, g] : chk.gaps) t.rows.push_back({r, g});
    rep.tables["blowup-gaps"] = t;
    return rep;
  }
  config_error("unknown custom task '" + task + "'");
}

// ---------------------------------------------------------------------------
// report assembly / emission
// ---------------------------------------------------------------------------

json report_to_json(const std::vector<ScenarioReport>& reps, double tol_scale,
                    const RadiusSchedule& sched, bool deterministic) {
  json out;
  out["schema"] = kReportSchema;
  out["version"] = kVersion;
  out["tolerance_scale"] = tol_scale;
  out["schedule_hash"] = schedule_hash(sched);
  out["deterministic"] = deterministic;
  bool pass = true;
  json scens = json::array();
  for (const auto& rep : reps) {
    json s;
    s["name"] = rep.name;
    s["pass"] = rep.pass;
    json records = json::array();
    for (const auto& r : rep.records) {
      json rec;
      rec["id"] = r.id;
      rec["value"] = r.value;
      rec["threshold"] = r.threshold;
      rec["pass"] = r.pass;
      if (!r.note.empty()) rec["note"] = r.note;
      records.push_back(std::move(rec));
    }
    s["records"] = std::move(records);
    json tables = json::object();
    for (const auto& [id, t] : rep.tables) {
      json tj;
      tj["columns"] = t.columns;
      tj["rows"] = t.rows;
      tables[id] = std::move(tj);
    }
    s["tables"] = std::move(tables);
    pass = pass && rep.pass;
    scens.push_back(std::move(s));
  }
  out["scenarios"] = std::move(scens);
  out["pass"] = pass;
  return out;
}

void write_csv(const json& table, std::ostream& os) {
  const auto& cols = table.at("columns");
  for (size_t i = 0; i < cols.size(); ++i)
    os << cols[i].get<std::string>() << (i + 1 < cols.size() ? "," : "\n");
  for (const auto& row : table.at("rows")) {
    for (size_t i = 0; i < row.size(); ++i) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", row[i].get<double>());
      os << buf << (i + 1 < row.size() ? "," : "\n");
    }
  }
}

int cmd_run(const std::string& config_path, std::string out_dir, int jobs,
            double tol_scale_flag) {
  json cfg;
  {
    std::ifstream in(config_path);
    if (!in) config_error("cannot open config file " + config_path);
    try {
      cfg = json::parse(in);
    } catch (const json::exception& e) {
      config_error(std::string("JSON parse failure: ") + e.what());
    }
  }
  if (cfg.value("schema", "") != std::string(kConfigSchema))
    config_error("config schema must be '" + std::string(kConfigSchema) + "'");
  double tol_scale = tol_scale_flag * cfg.value("tolerance_scale", 1.0);
  if (!(tol_scale > 0.0)) config_error("tolerance scale must be positive");
  RadiusSchedule sched = parse_schedule(cfg);
  bool deterministic = cfg.value("deterministic", true);

  if (const char* env = std::getenv("PAIRLAB_OUT"))
    out_dir = env;  // environment override
  else if (out_dir.empty())
    out_dir = cfg.value("out", "pairlab-reports");

  std::vector<std::string> names;
  if (cfg.contains("scene")) {
    names.push_back("custom");
  } else {
    json sel = cfg.value("scenarios", json("all"));
    if (sel.is_string()) {
      if (sel.get<std::string>() == "all")
        names = scenario_names();
      else
        names.push_back(sel.get<std::string>());
    } else {
      for (const auto& s : sel) names.push_back(s.get<std::string>());
    }
    for (const auto& n : names)
      if (!has_scenario(n)) config_error("unknown scenario '" + n + "'");
  }

  std::vector<ScenarioReport> reports(names.size());
  auto worker = [&](size_t i) {
    if (names[i] == "custom")
      reports[i] = run_custom(cfg, tol_scale, sched);
    else
      reports[i] = run_scenario(names[i], tol_scale);
  };
  if (jobs <= 1) {
    for (size_t i = 0; i < names.size(); ++i) worker(i);
  } else {
    std::vector<std::future<void>> futs;
    size_t next = 0;
    while (next < names.size()) {
      while (futs.size() < size_t(jobs) && next < names.size())
        futs.push_back(std::async(std::launch::async, worker, next++));
      for (auto& f : futs) f.get();
      futs.clear();
    }
  }

  json rj = report_to_json(reports, tol_scale, sched, deterministic);
  fs::create_directories(out_dir);
  fs::path report_path = fs::path(out_dir) / "report.json";
  {
    std::ofstream os(report_path);
    os << rj.dump(2) << "\n";
  }
  bool pass = rj["pass"].get<bool>();
  int failures = 0;
  for (const auto& rep : reports) {
    for (const auto& r : rep.records)
      if (!r.pass) {
        ++failures;
        std::cout << "FAIL " << rep.name << "/" << r.id << " value=" << r.value
                  << " threshold=" << r.threshold << "\n";
      }
    std::cout << (rep.pass ? "pass " : "FAIL ") << rep.name << " ("
              << rep.records.size() << " checks, " << rep.elapsed_seconds
              << " s)\n";
  }
  std::cout << "report: " << report_path.string() << "\n";
  if (!pass) std::cout << failures << " failing check(s)\n";
  return pass ? 0 : 1;
}

int cmd_emit(const std::string& report_path, const std::string& table_id,
             const std::string& out_file) {
  json rj;
  {
    std::ifstream in(report_path);
    if (!in) config_error("cannot open report " + report_path);
    try {
      rj = json::parse(in);
    } catch (const json::exception& e) {
      config_error(std::string("report parse failure: ") + e.what());
    }
  }
  for (const auto& scen : rj.at("scenarios")) {
    const auto& tables = scen.at("tables");
    std::string key = table_id;
    std::string prefix = scen.at("name").get<std::string>() + "/";
    if (key.rfind(prefix, 0) == 0) key = key.substr(prefix.size());
    if (tables.contains(key) &&
        (table_id.find('/') == std::string::npos ||
         table_id.rfind(prefix, 0) == 0)) {
      if (out_file.empty()) {
        write_csv(tables[key], std::cout);
      } else {
        std::ofstream os(out_file);
        write_csv(tables[key], os);
      }
      return 0;
    }
  }
  std::cerr << "UnknownTable: no table '" << table_id << "' in the report\n";
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pairlab: verification runs for pairings between "
               "divergence-measure fields and BV functions"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run scenario assertions from a config");
  std::string config_path, out_dir;
  int jobs = 1;
  double tol_scale = 1.0;
  run->add_option("--config", config_path, "configuration file (JSON)")
      ->required();
  run->add_option("--out", out_dir,
                  "output directory (overridden by PAIRLAB_OUT)");
  run->add_option("--jobs", jobs, "parallel scenario workers");
  run->add_option("--tolerance-scale", tol_scale,
                  "multiply every threshold by this factor");

  auto* ls = app.add_subcommand("list-scenarios", "list the bundled gallery");

  auto* emit =
      app.add_subcommand("emit-plotdata", "extract a report table as CSV");
  std::string report_path, table_id, out_file;
  emit->add_option("--report", report_path, "report.json path")->required();
  emit->add_option("--table", table_id,
                   "table id (optionally scenario-name/table-id)")
      ->required();
  emit->add_option("--out", out_file, "output CSV (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, jobs, tol_scale);
    if (*ls) {
      for (const auto& name : scenario_names())
        std::cout << name << "\n    " << scenario_summary(name) << "\n";
      return 0;
    }
    if (*emit) return cmd_emit(report_path, table_id, out_file);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
