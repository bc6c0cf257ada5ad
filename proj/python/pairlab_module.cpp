// Python bindings for the main operations: geometry probes, traces,
// pairings, Gauss-Green ledgers, coarea checks and the Cantor lab.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pairlab/cantor.hpp"
#include "pairlab/scenario.hpp"

namespace py = pybind11;
using namespace pairlab;

namespace {

Vec2 to_vec(const std::pair<double, double>& p) { return {p.first, p.second}; }

Poly2 poly_from(const std::vector<std::vector<double>>& rows) {
  Poly2 p;
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      p.set(int(i), int(j), rows[i][j]);
  return p;
}

TraceMethod method_from(const std::string& m) {
  if (m == "analytic") return TraceMethod::Analytic;
  if (m == "halfball") return TraceMethod::HalfBall;
  if (m == "cylinder") return TraceMethod::Cylinder;
  fail("BadArgument", "trace method must be analytic|halfball|cylinder");
}

py::dict estimate_dict(const TraceEstimate& e) {
  py::dict d;
  d["value"] = e.value;
  d["order"] = e.order;
  d["error_estimate"] = e.error_estimate;
  d["converged"] = e.converged;
  py::list samples;
  for (auto& [r, v] : e.samples) samples.append(py::make_tuple(r, v));
  d["samples"] = samples;
  return d;
}

py::dict report_dict(const ScenarioReport& rep) {
  py::dict d;
  d["name"] = rep.name;
  d["pass"] = rep.pass;
  py::list records;
  for (const auto& r : rep.records) {
    py::dict rec;
    rec["id"] = r.id;
    rec["value"] = r.value;
    rec["threshold"] = r.threshold;
    rec["pass"] = r.pass;
    rec["note"] = r.note;
    records.append(rec);
  }
  d["records"] = records;
  py::dict tables;
  for (const auto& [id, t] : rep.tables) {
    py::dict tj;
    tj["columns"] = t.columns;
    tj["rows"] = t.rows;
    tables[py::str(id)] = tj;
  }
  d["tables"] = tables;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pairlab, m) {
  m.doc() = "pairings between divergence-measure fields and BV functions "
            "on planar scenes";

  py::register_exception<Error>(m, "PairlabError");

  py::class_<FinitePerimeterSet>(m, "Set")
      .def_static("half_plane",
                  [](std::pair<double, double> nu, double off) {
                    return FinitePerimeterSet::half_plane(to_vec(nu), off);
                  })
      .def_static("disc",
                  [](std::pair<double, double> c, double r) {
                    return FinitePerimeterSet::disc(to_vec(c), r);
                  })
      .def_static("box",
                  [](std::pair<double, double> lo, std::pair<double, double> hi) {
                    return FinitePerimeterSet::box(to_vec(lo), to_vec(hi));
                  })
      .def_static("polygon",
                  [](const std::vector<std::pair<double, double>>& vs) {
                    std::vector<Vec2> pts;
                    for (auto& p : vs) pts.push_back(to_vec(p));
                    return FinitePerimeterSet::polygon(std::move(pts));
                  })
      .def_static("product1d",
                  [](const std::vector<std::pair<double, double>>& iv, int axis) {
                    return FinitePerimeterSet::product1d(IntervalUnion(iv),
                                                         axis - 1);
                  },
                  py::arg("intervals"), py::arg("axis") = 1)
      .def_static("union_",
                  [](const FinitePerimeterSet& a, const FinitePerimeterSet& b) {
                    return FinitePerimeterSet::boolean(BoolOp::Union, a, b);
                  })
      .def_static("intersection",
                  [](const FinitePerimeterSet& a, const FinitePerimeterSet& b) {
                    return FinitePerimeterSet::boolean(BoolOp::Intersection, a, b);
                  })
      .def_static("difference",
                  [](const FinitePerimeterSet& a, const FinitePerimeterSet& b) {
                    return FinitePerimeterSet::boolean(BoolOp::Difference, a, b);
                  })
      .def("classify",
           [](const FinitePerimeterSet& s, std::pair<double, double> p) {
             switch (classify_point(s, to_vec(p))) {
               case PointClass::Interior:
                 return "interior";
               case PointClass::Exterior:
                 return "exterior";
               default:
                 return "boundary";
             }
           })
      .def("interior_normal",
           [](const FinitePerimeterSet& s, std::pair<double, double> p) {
             Vec2 n = interior_normal(s, to_vec(p));
             return py::make_tuple(n.x, n.y);
           })
      .def("perimeter",
           [](const FinitePerimeterSet& s) { return perimeter(s); })
      .def("area_in_ball",
           [](const FinitePerimeterSet& s, std::pair<double, double> c,
              double r) { return area_in_ball(s, to_vec(c), r); })
      .def("ball_clip_area",
           [](const FinitePerimeterSet& s, std::pair<double, double> c,
              double r) { return clip(s, BallProbe{to_vec(c), r}).area; })
      .def("cylinder_clip_area",
           [](const FinitePerimeterSet& s, std::pair<double, double> c,
              std::pair<double, double> axis, double r, double rho) {
             return clip(s, CylinderProbe{to_vec(c), to_vec(axis), r, rho}).area;
           });

  py::class_<DMField>(m, "Field")
      .def_static("constant",
                  [](std::pair<double, double> a, const FinitePerimeterSet& dom) {
                    return DMField::constant(to_vec(a), dom);
                  })
      .def_static("polynomial",
                  [](const std::vector<std::vector<double>>& fx,
                     const std::vector<std::vector<double>>& fy,
                     const FinitePerimeterSet& dom) {
                    return DMField::polynomial({poly_from(fx), poly_from(fy)},
                                               dom);
                  })
      .def_static(
          "with_jumps",
          [](const std::vector<std::vector<double>>& fx,
             const std::vector<std::vector<double>>& fy,
             const std::vector<std::pair<std::pair<double, double>,
                                         FinitePerimeterSet>>& jumps,
             const FinitePerimeterSet& dom) {
            std::vector<JumpTerm> terms;
            for (auto& [coef, region] : jumps)
              terms.push_back(JumpTerm{to_vec(coef), region});
            return DMField({poly_from(fx), poly_from(fy)}, std::move(terms),
                           dom);
          })
      .def("sup_norm", &DMField::sup_norm)
      .def("eval",
           [](const DMField& f, std::pair<double, double> p) {
             Vec2 v = f.eval(to_vec(p));
             return py::make_tuple(v.x, v.y);
           })
      .def("divergence_on_ball",
           [](const DMField& f, std::pair<double, double> c, double r) {
             return eval_on(f.divergence(), Probe{BallProbe{to_vec(c), r}});
           });

  py::class_<BVFunction>(m, "BV")
      .def_static("characteristic",
                  [](const FinitePerimeterSet& e, const FinitePerimeterSet& dom) {
                    return BVFunction::characteristic(e, dom);
                  })
      .def_static("smooth",
                  [](const std::vector<std::vector<double>>& coeffs,
                     const FinitePerimeterSet& dom) {
                    return BVFunction::smooth(poly_from(coeffs), dom);
                  })
      .def_static("staircase",
                  [](double lambda, int depth, int axis,
                     const FinitePerimeterSet& dom) {
                    return BVFunction::staircase(lambda, depth, axis - 1, dom);
                  },
                  py::arg("lam"), py::arg("depth"), py::arg("axis"),
                  py::arg("domain"))
      .def("eval",
           [](const BVFunction& u, std::pair<double, double> p) {
             return u.eval(to_vec(p));
           })
      .def("representative",
           [](const BVFunction& u, std::pair<double, double> p, double lam) {
             return u.representative(to_vec(p), lam);
           })
      .def("total_variation", [](const BVFunction& u) {
        return u.variation_total(EvalWindow{u.domain()});
      });

  py::class_<RadiusSchedule>(m, "Schedule")
      .def(py::init<>())
      .def_readwrite("r0", &RadiusSchedule::r0)
      .def_readwrite("q", &RadiusSchedule::q)
      .def_readwrite("n", &RadiusSchedule::n)
      .def_readwrite("rho0", &RadiusSchedule::rho0)
      .def_readwrite("q_rho", &RadiusSchedule::q_rho)
      .def_readwrite("n_rho", &RadiusSchedule::n_rho);

  m.def(
      "halfball_traces",
      [](const DMField& f, std::pair<double, double> x,
         std::pair<double, double> nu, const RadiusSchedule& sched) {
        auto tr = halfball_traces(f, to_vec(x), to_vec(nu), sched);
        py::dict d;
        d["plus"] = estimate_dict(tr.plus);
        d["minus"] = estimate_dict(tr.minus);
        d["star"] = tr.star;
        return d;
      },
      py::arg("field"), py::arg("x"), py::arg("nu"),
      py::arg("schedule") = RadiusSchedule{});

  m.def(
      "cyl_trace",
      [](const DMField& f, std::pair<double, double> x,
         std::pair<double, double> zeta, const RadiusSchedule& sched) {
        auto ct = cyl_trace(f, to_vec(x), to_vec(zeta), sched);
        py::dict d;
        d["value"] = ct.outer.value;
        d["converged"] = ct.converged;
        d["outer"] = estimate_dict(ct.outer);
        return d;
      },
      py::arg("field"), py::arg("x"), py::arg("zeta"),
      py::arg("schedule") = RadiusSchedule{});

  m.def(
      "theta_density",
      [](const DMField& f, const BVFunction& u, std::pair<double, double> x,
         const std::string& method, const RadiusSchedule& sched) {
        ThetaSample s = theta_density(f, u, to_vec(x), method_from(method), sched);
        py::dict d;
        d["value"] = s.value;
        d["converged"] = s.converged;
        d["method_invalid"] = s.method_invalid;
        return d;
      },
      py::arg("field"), py::arg("u"), py::arg("x"), py::arg("method"),
      py::arg("schedule") = RadiusSchedule{});

  m.def(
      "gauss_green",
      [](const DMField& f, const BVFunction& u, const FinitePerimeterSet& e,
         const std::string& variant, const std::string& method,
         const RadiusSchedule& sched) {
        auto l = gauss_green(
            f, u, e,
            variant == "closure" ? GGVariant::Closure : GGVariant::Interior,
            method_from(method), sched);
        py::dict d;
        d["volume"] = l.volume;
        d["pairing"] = l.pairing;
        d["boundary"] = l.boundary;
        d["residual"] = l.residual;
        return d;
      },
      py::arg("field"), py::arg("u"), py::arg("set"),
      py::arg("variant") = "interior", py::arg("method") = "analytic",
      py::arg("schedule") = RadiusSchedule{});

  m.def(
      "coarea_pairing",
      [](const DMField& f, const BVFunction& u, int t_nodes) {
        auto c = coarea_pairing_check(f, u, EvalWindow{f.domain()}, t_nodes);
        py::dict d;
        d["lhs"] = c.lhs;
        d["rhs"] = c.rhs;
        d["residual"] = c.residual;
        return d;
      },
      py::arg("field"), py::arg("u"), py::arg("t_nodes") = 64);

  m.def("pairing_mass_on_ball",
        [](const DMField& f, const BVFunction& u, std::pair<double, double> c,
           double r) {
          return eval_on(pairing_analytic(f, u), Probe{BallProbe{to_vec(c), r}});
        });

  m.def(
      "box_dimension",
      [](int num, int den, int dmin, int dmax) {
        auto est = box_dimension(Rational(num, den), dmin, dmax);
        py::dict d;
        d["estimate"] = est.estimate;
        d["closed_form"] = est.closed_form;
        return d;
      },
      py::arg("lambda_num"), py::arg("lambda_den"), py::arg("depth_min") = 4,
      py::arg("depth_max") = 14);

  m.def("scenario_names", &scenario_names);
  m.def(
      "run_scenario",
      [](const std::string& name, double tol_scale) {
        return report_dict(run_scenario(name, tol_scale));
      },
      py::arg("name"), py::arg("tolerance_scale") = 1.0);

  m.attr("__version__") = kVersion;
}
