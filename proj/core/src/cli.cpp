#include "trisys/cli.hpp"

#include <cstring>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "trisys/catalog.hpp"
#include "trisys/functors.hpp"
#include "trisys/json_io.hpp"
#include "trisys/meataxe.hpp"
#include "trisys/nullsearch.hpp"
#include "trisys/report.hpp"

namespace trisys {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << bytes;
}

// build keys: a catalog triple-system key, optionally prefixed by a functor
// ("g:", "gtilde:" or "gnull:") to emit the constructed algebra instead.
int cmd_build(const std::string& key, int64_t p, const std::string& out_path) {
  std::string functor, tkey = key;
  for (const char* f : {"g:", "gtilde:", "gnull:"}) {
    if (key.rfind(f, 0) == 0) {
      functor = std::string(f, strlen(f) - 1);
      tkey = key.substr(strlen(f));
      break;
    }
  }
  std::string blob;
  std::string what;
  if (functor.empty()) {
    TripleSystem t = build_from_key(tkey, p);
    what = "dim " + std::to_string(t.dim());
    blob = export_json(t);
  } else {
    TripleSystem t = build_from_key(tkey, p);
    GradedAlgebra g = [&] {
      if (functor == "g") {
        if (t.kind() == TsKind::STS) return build_g_sts(t);
        if (t.kind() == TsKind::OTS) return build_g_ots(t);
        return build_g_null(t);
      }
      if (functor == "gtilde") {
        if (t.kind() == TsKind::STS) return build_gtilde_sts(t);
        return build_gtilde_ots(t);
      }
      return build_g_null(t);
    }();
    what = "dim " + std::to_string(g.dim()) + " = " + std::to_string(g.dim_even()) + "+" +
           std::to_string(g.dim_odd());
    blob = export_json(g);
  }
  if (out_path.empty()) {
    std::cout << blob << "\n";
  } else {
    write_file(out_path, blob);
    std::cout << "built " << key << ": " << what << " over GF(" << p << ") -> " << out_path
              << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& path, bool axioms, bool jacobi) {
  Imported obj = import_json(read_file(path));
  bool ok = true;
  if (std::holds_alternative<TripleSystem>(obj)) {
    const TripleSystem& t = std::get<TripleSystem>(obj);
    if (jacobi) {
      std::cerr << "verify: --jacobi applies to algebra files\n";
      return 2;
    }
    AxiomReport rep = check_axioms(t);
    std::cout << "axioms[" << ts_kind_name(t.kind()) << "] dim " << t.dim() << ": "
              << (rep.pass() ? "pass" : "FAIL (" + std::to_string(rep.violations.size()) +
                                            " violations)")
              << "\n";
    for (size_t i = 0; i < rep.violations.size() && i < 8; ++i) {
      std::cout << "  identity (" << rep.violations[i].tag << ") at";
      for (int v : rep.violations[i].tuple) std::cout << " " << v;
      std::cout << "\n";
    }
    ok = rep.pass();
  } else {
    const GradedAlgebra& g = std::get<GradedAlgebra>(obj);
    if (axioms) {
      std::cerr << "verify: --axioms applies to triple-system files\n";
      return 2;
    }
    JacobiReport rep = g.kind() == AlgKind::Lie ? check_jacobi(g) : check_super_jacobi(g);
    std::cout << (g.kind() == AlgKind::Lie ? "jacobi" : "super-jacobi") << " dim " << g.dim()
              << ": "
              << (rep.pass() ? "pass (" + std::to_string(rep.triples_checked) + " triples)"
                             : "FAIL (" + std::to_string(rep.violations.size()) + " violations)")
              << "\n";
    for (size_t i = 0; i < rep.violations.size() && i < 8; ++i)
      std::cout << "  triple (" << rep.violations[i][0] << ", " << rep.violations[i][1] << ", "
                << rep.violations[i][2] << ")\n";
    ok = rep.pass();
  }
  return ok ? 0 : 1;
}

int cmd_analyze(const std::string& path, bool do_center, bool do_derived, bool do_simple,
                bool do_killing, uint64_t seed) {
  Imported obj = import_json(read_file(path));
  if (!std::holds_alternative<GradedAlgebra>(obj)) {
    std::cerr << "analyze: expected an algebra file (gsc-1)\n";
    return 2;
  }
  const GradedAlgebra& g = std::get<GradedAlgebra>(obj);
  std::cout << "algebra dim " << g.dim() << " = " << g.dim_even() << " + " << g.dim_odd()
            << " over GF(" << g.p() << "), kind "
            << (g.kind() == AlgKind::Lie ? "lie" : "superlie") << "\n";
  bool ok = true;
  if (do_center) std::cout << "center: dim " << center(g).dim() << "\n";
  if (do_derived) std::cout << "derived subalgebra: dim " << derived_subalgebra(g).dim() << "\n";
  if (do_simple) {
    SimplicityCertificate cert = is_simple(g, seed);
    const char* verdict = cert.verdict == SimplicityCertificate::Verdict::Simple ? "simple"
                          : cert.verdict == SimplicityCertificate::Verdict::NotSimple
                              ? "not_simple"
                              : "probably_simple";
    std::cout << "simplicity: " << verdict << " (" << cert.reason;
    if (cert.witness) std::cout << ", witness dim " << cert.witness->dim();
    if (cert.lines_checked) std::cout << ", " << cert.lines_checked << " lines spun";
    std::cout << ", seed " << cert.seed << ")\n";
    if (cert.verdict == SimplicityCertificate::Verdict::ProbablySimple) ok = false;
  }
  if (do_killing) {
    KillingForm kf = killing_form(g);
    std::cout << "killing form rank: " << kf.rank << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int run_command(const std::vector<std::string>& argv) {
  CLI::App app{"exact-arithmetic engine for symplectic/orthogonal triple systems and their "
               "Lie (super)algebras over GF(p)"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "construct a catalog triple system");
  std::string key, out_path;
  int64_t p = 3;
  build->add_option("key", key, "catalog key, e.g. sts:dim2:ii:eps=1")->required();
  build->add_option("--p", p, "field characteristic (odd prime)");
  build->add_option("--out", out_path, "output file (stdout if omitted)");

  // verify
  auto* verify = app.add_subcommand("verify", "re-check identities of a stored object");
  std::string vpath;
  bool vaxioms = false, vjacobi = false;
  verify->add_option("file", vpath, "gsc-1 or tsc-1 JSON file")->required();
  verify->add_flag("--axioms", vaxioms, "triple-system identity sweep");
  verify->add_flag("--jacobi", vjacobi, "(super) Jacobi sweep");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "structure analysis of a stored algebra");
  std::string apath;
  bool acenter = false, aderived = false, asimple = false, akilling = false;
  uint64_t aseed = 1;
  analyze->add_option("file", apath, "gsc-1 JSON file")->required();
  analyze->add_flag("--center", acenter);
  analyze->add_flag("--derived", aderived);
  analyze->add_flag("--simple", asimple);
  analyze->add_flag("--killing", akilling);
  analyze->add_option("--seed", aseed, "randomness seed for the simplicity search");

  // report
  auto* report = app.add_subcommand("report", "verified construction table for a prime");
  int64_t rp = 3;
  uint64_t rseed = 1;
  std::string rjson;
  report->add_option("--p", rp, "field characteristic");
  report->add_option("--seed", rseed, "randomness seed");
  report->add_option("--json", rjson, "also write a machine-readable summary here");

  // search-null-sts
  auto* search = app.add_subcommand("search-null-sts",
                                    "random search for simple null symplectic triple systems");
  int sdim = 2;
  int64_t sp = 3, strials = 1000;
  uint64_t sseed = 1;
  search->add_option("--dim", sdim, "dimension")->required();
  search->add_option("--p", sp, "field characteristic")->required();
  search->add_option("--trials", strials, "number of sampled tensors")->required();
  search->add_option("--seed", sseed, "randomness seed")->required();

  std::vector<std::string> args = argv;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build->parsed()) return cmd_build(key, p, out_path);
    if (verify->parsed()) return cmd_verify(vpath, vaxioms, vjacobi);
    if (analyze->parsed()) return cmd_analyze(apath, acenter, aderived, asimple, akilling, aseed);
    if (report->parsed()) {
      ReportResult res = run_report(rp, rseed, std::cout);
      if (!rjson.empty()) write_file(rjson, res.to_json().dump(1));
      return res.all_pass() ? 0 : 1;
    }
    if (search->parsed()) {
      NullSearchResult res = search_null_sts(sdim, sp, strials, sseed, &std::cout);
      return 0;
    }
  } catch (const ImportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace trisys
