#include "trisys/report.hpp"

#include <functional>
#include <iomanip>

#include "trisys/catalog.hpp"
#include "trisys/functors.hpp"
#include "trisys/meataxe.hpp"

namespace trisys {

nlohmann::json ReportResult::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& r : rows)
    rows_json.push_back({{"name", r.name}, {"detail", r.detail}, {"pass", r.pass}});
  return {{"rows", rows_json}, {"pass", all_pass()}};
}

namespace {

struct Expect {
  std::string name;
  std::function<GradedAlgebra()> build;
  int dim;
  int dim_even;
  bool simple;
};

bool verdict_matches(const SimplicityCertificate& c, bool want_simple) {
  using V = SimplicityCertificate::Verdict;
  return want_simple ? c.verdict == V::Simple : c.verdict == V::NotSimple;
}

}  // namespace

ReportResult run_report(int64_t p, uint64_t seed, std::ostream& out) {
  ReportResult result;
  std::vector<Expect> table;

  auto add = [&](std::string name, std::function<GradedAlgebra()> build, int dim, int even,
                 bool simple) {
    table.push_back({std::move(name), std::move(build), dim, even, simple});
  };

  if (p == 3) {
    add("gtilde(sts8)", [] { return build_gtilde_sts(sts8()); }, 18, 10, true);
    add("gtilde(sts:jordan:h3_k)",
        [p] { return build_gtilde_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Unit, p)))); },
        35, 21, true);
    add("gtilde(sts:jordan:h3_kk)",
        [p] { return build_gtilde_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Binarion, p)))); },
        54, 34, true);
    add("gtilde(sts:jordan:h3_quat)",
        [p] { return build_gtilde_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Quaternion, p)))); },
        98, 66, true);
    add("gtilde(sts:jordan:h3_oct)",
        [p] { return build_gtilde_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Octonion, p)))); },
        189, 133, true);
    add("g(ots:gtype:alpha=1)", [] { return build_g_ots(ots_gtype(1)); }, 24, 10, true);
    add("g(ots:ftype)", [] { return build_g_null(ots_ftype()); }, 37, 21, true);
    add("g(ots:jordan:h3_quat)",
        [p] { return build_g_ots(ots_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Quaternion, p)))); },
        50, 24, true);
    add("g(ots:jordan:h3_oct)",
        [p] { return build_g_ots(ots_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Octonion, p)))); },
        105, 55, true);
    add("g(T_{2,1}) = L(1)", [] { return build_g_sts(sts_dim2_case_ii(1)); }, 10, 6, true);
    add("g(T_{2,2}) = L(2)", [] { return build_g_sts(sts_dim2_case_ii(2)); }, 10, 6, true);
    add("g(sts8) (Brown)", [] { return build_g_sts(sts8()); }, 29, 13, true);
    add("gtilde(ots:ftype) (Brown)", [] { return build_gtilde_ots(ots_ftype()); }, 29, 21, true);
    add("gtilde(ots:dalpha:alpha=-1) = L(1)",
        [] { return build_gtilde_ots(ots_dalpha_tensor(2)); }, 10, 6, true);
    add("g(sts:jordan:h3_kk) (77-dim)",
        [p] { return build_g_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Binarion, p)))); },
        77, 37, true);
  } else {
    add("g(sts:jordan:h3_k) (F4)",
        [p] { return build_g_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Unit, p)))); },
        52, 24, true);
    add("g(sts:jordan:h3_kk) (E6)",
        [p] { return build_g_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Binarion, p)))); },
        78, 38, true);
    add("g(sts:jordan:h3_quat) (E7)",
        [p] { return build_g_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Quaternion, p)))); },
        133, 69, true);
    add("g(sts:jordan:h3_oct) (E8)",
        [p] { return build_g_sts(sts_from_jordan(make_h3(make_composition(CompositionAlgebra::Kind::Octonion, p)))); },
        248, 136, true);
    add("g(sts:classical:g2) (G2)", [p] { return build_g_sts(sts_g2(p)); }, 14, 6, true);
  }

  out << "report over GF(" << p << "), seed " << seed << "\n";
  for (auto& e : table) {
    ReportRow row;
    row.name = e.name;
    try {
      GradedAlgebra g = e.build();
      SimplicityCertificate cert = is_simple(g, seed);
      bool dims_ok = g.dim() == e.dim && g.dim_even() == e.dim_even;
      bool simple_ok = verdict_matches(cert, e.simple);
      row.pass = dims_ok && simple_ok;
      row.detail = "dim " + std::to_string(g.dim()) + " (" + std::to_string(g.dim_even()) +
                   "+" + std::to_string(g.dim_odd()) + "), " + cert.reason;
      if (!dims_ok)
        row.detail += " [expected dim " + std::to_string(e.dim) + " (" +
                      std::to_string(e.dim_even) + "+...)]";
      if (!simple_ok) row.detail += e.simple ? " [expected simple]" : " [expected not simple]";
    } catch (const std::exception& ex) {
      row.pass = false;
      row.detail = std::string("error: ") + ex.what();
    }
    out << (row.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(38) << row.name << " "
        << row.detail << "\n";
    result.rows.push_back(std::move(row));
  }

  if (p == 3) {
    for (int32_t eps : {1, 2}) {
      ReportRow row;
      row.name = "cartan relations L(" + std::to_string(eps) + ")";
      CartanReport cr = verify_Leps_cartan(eps);
      row.pass = cr.pass;
      row.detail = cr.pass ? "all six relations hold" : "failures: " + std::to_string(cr.failures.size());
      out << (row.pass ? "  ok   " : "  FAIL ") << std::left << std::setw(38) << row.name << " "
          << row.detail << "\n";
      result.rows.push_back(std::move(row));
    }
  }
  out << (result.all_pass() ? "report: PASS" : "report: FAIL") << "\n";
  return result;
}

}  // namespace trisys
