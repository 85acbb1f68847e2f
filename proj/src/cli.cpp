#include "shiftcalc/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "shiftcalc/aligned_shift.hpp"
#include "shiftcalc/errors.hpp"
#include "shiftcalc/homotopy.hpp"
#include "shiftcalc/invariants.hpp"
#include "shiftcalc/selftest.hpp"
#include "shiftcalc/serialization.hpp"
#include "shiftcalc/shift_equivalence.hpp"

namespace shiftcalc::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::string command;
  double tol = kDefaultTolerance;
  bool verbose = false;
  bool timing = false;
  unsigned jobs = 1;
  Json inputs = Json::object();
  std::ostream* err = nullptr;

  IntMatrix matrix(const std::string& name, const std::string& path, bool nonneg = true) {
    record(name, path);
    return parse_matrix_file(path, nonneg);
  }
  Json document(const std::string& name, const std::string& path) {
    record(name, path);
    return read_json_file(path);
  }
  void record(const std::string& name, const std::string& path) {
    inputs[name] = Json{{"path", path}, {"sha256", file_sha256(path)}};
  }
  void say(const std::string& line) const {
    if (verbose) *err << line << '\n';
  }
};

struct Outcome {
  int code = kOk;
  Json verdict = Json::object();
};

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << j.dump(2) << '\n';
}

Json invariants_json(const DimensionInvariants& inv) {
  return Json{{"nonzero_char_poly", polynomial_to_json(inv.nonzero_char_poly)},
              {"bowen_franks", group_to_json(inv.bowen_franks)},
              {"eventual_rank", inv.eventual_rank},
              {"det_away_from_zero", inv.det_away_from_zero.get_str()}};
}

Json residuals_json(const AlignmentResiduals& r) {
  return Json{{"x", r.x}, {"y", r.y}};
}

Json homotopy_report_json(const HomotopyReport& r) {
  Json j{{"ok", r.ok},
         {"start_residual", r.start_residual},
         {"end_residual", r.end_residual},
         {"max_unitarity_defect", r.max_unitarity_defect}};
  if (r.first_failing_sample) j["first_failing_sample"] = *r.first_failing_sample;
  if (!r.reason.empty()) j["reason"] = r.reason;
  return j;
}

Json alignment_json(const AlignedShiftData& d, double tol) {
  const bool concrete = verify_concrete_shift(d, tol);
  const AlignmentResiduals direct = alignment_residuals(d);
  const AlignmentResiduals via = two_arrow_alignment_residuals(d);
  const bool aligned = concrete && direct.max() <= tol;
  const bool via_ok = verify_aligned_via_two_arrows(d, tol);
  return Json{{"concrete", concrete},
              {"aligned", aligned},
              {"residuals", residuals_json(direct)},
              {"two_arrow_residuals", residuals_json(via)},
              {"two_arrow_aligned", via_ok},
              {"formulations_agree", aligned == via_ok}};
}

}  // namespace

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[8192];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shift equivalence, graph correspondences and aligned shifts", "shiftcalc"};
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  ctx.err = &err;
  double tol_flag = -1.0;
  app.add_option("--tol", tol_flag, "Numerical tolerance (default $SHIFTCALC_TOL or 1e-9)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose,-v", ctx.verbose, "Human-readable progress on stderr");
  app.add_flag("--timing", ctx.timing, "Include wall-clock timing in the report");
  app.add_option("--jobs,-j", ctx.jobs, "Worker threads for witness search")
      ->check(CLI::Range(1u, 256u));

  std::function<Outcome()> action;

  // verify-se
  std::string a_path, b_path, r_path, s_path, witness_path, out_path;
  unsigned lag = 1, bound = 1;
  auto* verify = app.add_subcommand("verify-se", "Check a shift equivalence witness");
  verify->add_option("--a", a_path, "Matrix A")->required();
  verify->add_option("--b", b_path, "Matrix B")->required();
  verify->add_option("--r", r_path, "Matrix R")->required();
  verify->add_option("--s", s_path, "Matrix S")->required();
  verify->add_option("--lag", lag, "Lag m")->required();
  verify->callback([&] {
    action = [&] {
      SEWitness w{ctx.matrix("a", a_path), ctx.matrix("b", b_path), ctx.matrix("r", r_path),
                  ctx.matrix("s", s_path), lag};
      const SECheck c = check_se(w);
      Outcome o;
      o.verdict["verified"] = c.verified;
      if (c.failing) {
        o.verdict["failing_equation"] = to_string(*c.failing);
        err << "refuted: " << to_string(*c.failing) << " fails\n";
      }
      o.code = c.verified ? kOk : kRefuted;
      return o;
    };
  });

  // search-se
  auto* search = app.add_subcommand("search-se", "Bounded search for a witness");
  search->add_option("--a", a_path, "Matrix A")->required();
  search->add_option("--b", b_path, "Matrix B")->required();
  search->add_option("--lag", lag, "Lag m")->required();
  search->add_option("--bound", bound, "Largest entry of R and S")->required();
  search->add_option("--out", out_path, "Write the witness here");
  search->callback([&] {
    action = [&] {
      const IntMatrix a = ctx.matrix("a", a_path);
      const IntMatrix b = ctx.matrix("b", b_path);
      const auto w = search_se(a, b, lag, bound, SearchOptions{ctx.jobs});
      Outcome o;
      o.verdict["found"] = w.has_value();
      o.verdict["lag"] = lag;
      o.verdict["bound"] = bound;
      if (w) {
        o.verdict["witness"] = witness_to_json(*w);
        if (!out_path.empty()) write_json_file(out_path, witness_to_json(*w));
      }
      ctx.say(w ? "witness found" : "no witness inside the box");
      o.code = w ? kOk : kRefuted;
      return o;
    };
  });

  // invariants
  auto* inv = app.add_subcommand("invariants", "Shift equivalence invariants of A");
  inv->add_option("--a", a_path, "Matrix A")->required();
  inv->callback([&] {
    action = [&] {
      Outcome o;
      o.verdict = invariants_json(compute_invariants(ctx.matrix("a", a_path)));
      return o;
    };
  });

  // compare
  auto* cmp = app.add_subcommand("compare", "Compare the invariants of A and B");
  cmp->add_option("--a", a_path, "Matrix A")->required();
  cmp->add_option("--b", b_path, "Matrix B")->required();
  cmp->callback([&] {
    action = [&] {
      const IntMatrix a = ctx.matrix("a", a_path);
      const IntMatrix b = ctx.matrix("b", b_path);
      const ComparisonVerdict v = compare(a, b);
      Outcome o;
      o.verdict["result"] = v.distinguished ? "Distinguished" : "Inconclusive";
      o.verdict["separating"] = v.separating;
      o.verdict["a"] = invariants_json(compute_invariants(a));
      o.verdict["b"] = invariants_json(compute_invariants(b));
      for (const auto& name : v.separating) ctx.say("separated by " + name);
      o.code = v.distinguished ? kDistinguished : kOk;
      return o;
    };
  });

  // corr tensor / corr check-2arrow
  std::string psi_path, f_path, g_path;
  auto* corr = app.add_subcommand("corr", "Graph correspondence calculus");
  corr->require_subcommand(1);
  auto* tens = corr->add_subcommand("tensor", "X(R) (x) X(S)");
  tens->add_option("--r", r_path, "Matrix R")->required();
  tens->add_option("--s", s_path, "Matrix S")->required();
  tens->add_option("--out", out_path, "Write the correspondence here");
  tens->callback([&] {
    action = [&] {
      const IntMatrix r = ctx.matrix("r", r_path);
      const IntMatrix s = ctx.matrix("s", s_path);
      const auto x = GraphCorrespondence::from_matrix(r);
      const auto y = GraphCorrespondence::from_matrix(s, x.right_index());
      const auto t = tensor(x, y);
      std::size_t basis = 0;
      for (std::size_t v = 0; v < t.left_size(); ++v)
        for (std::size_t w = 0; w < t.right_size(); ++w) basis += t.basis(v, w).size();
      Outcome o;
      o.verdict["dims"] = matrix_to_json(t.dims().to_int());
      o.verdict["total_dim"] = t.total_dim();
      o.verdict["basis_size"] = basis;
      o.verdict["matches_product"] = t.dims().to_int() == mat_mul(r, s);
      if (!out_path.empty()) write_json_file(out_path, correspondence_to_json(t));
      return o;
    };
  });
  auto* two = corr->add_subcommand("check-2arrow", "Is psi a 2-arrow from f to g?");
  two->add_option("--psi", psi_path, "Block unitary F -> G")->required();
  two->add_option("--f", f_path, "Source 1-arrow")->required();
  two->add_option("--g", g_path, "Target 1-arrow")->required();
  two->callback([&] {
    action = [&] {
      const BlockUnitary psi = block_unitary_from_json(ctx.document("psi", psi_path));
      const OneArrow f = one_arrow_from_json(ctx.document("f", f_path));
      const OneArrow g = one_arrow_from_json(ctx.document("g", g_path));
      const double residual = two_arrow_residual(psi, f, g);
      const bool ok = check_two_arrow(psi, f, g, ctx.tol);
      Outcome o;
      o.verdict["two_arrow"] = ok;
      o.verdict["residual"] = residual;
      o.verdict["unitarity_defect"] = psi.unitarity_defect();
      o.code = ok ? kOk : kRefuted;
      return o;
    };
  });

  // aligned verify / aligned from-se
  std::string phi_m_path, phi_n_path, psi_x_path, psi_y_path;
  auto* aligned = app.add_subcommand("aligned", "Concrete and aligned shifts");
  aligned->require_subcommand(1);
  auto* averify = aligned->add_subcommand("verify", "Check the alignment equations");
  averify->add_option("--data", f_path, "shift.json")->required();
  averify->callback([&] {
    action = [&] {
      const AlignedShiftData d = shift_from_json(ctx.document("data", f_path));
      Outcome o;
      o.verdict = alignment_json(d, ctx.tol);
      o.verdict["lag"] = d.lag();
      o.code = o.verdict["aligned"].get<bool>() ? kOk : kRefuted;
      return o;
    };
  });
  auto* afrom = aligned->add_subcommand("from-se", "Concrete shift of a verified witness");
  afrom->add_option("--witness", witness_path, "Witness JSON")->required();
  afrom->add_option("--phi-m", phi_m_path, "Block unitary X (x) M -> M (x) Y");
  afrom->add_option("--phi-n", phi_n_path, "Block unitary Y (x) N -> N (x) X");
  afrom->add_option("--psi-x", psi_x_path, "Block unitary M (x) N -> X^m");
  afrom->add_option("--psi-y", psi_y_path, "Block unitary N (x) M -> Y^m");
  afrom->add_option("--out", out_path, "Write shift.json here");
  afrom->callback([&] {
    action = [&] {
      const SEWitness w = witness_from_json(ctx.document("witness", witness_path));
      ShiftUnitaries maps;
      auto load = [&](const char* name, const std::string& path,
                      std::optional<BlockUnitary>& slot) {
        if (!path.empty()) slot = block_unitary_from_json(ctx.document(name, path));
      };
      load("phi_m", phi_m_path, maps.phi_m);
      load("phi_n", phi_n_path, maps.phi_n);
      load("psi_x", psi_x_path, maps.psi_x);
      load("psi_y", psi_y_path, maps.psi_y);
      const AlignedShiftData d = build_from_se(w, maps);
      Outcome o;
      o.verdict = alignment_json(d, ctx.tol);
      o.verdict["lag"] = d.lag();
      if (!out_path.empty()) write_json_file(out_path, shift_to_json(d));
      return o;
    };
  });

  // homotopy from-se
  unsigned steps = 16;
  auto* homotopy = app.add_subcommand("homotopy", "Homotopies of 1-arrows");
  homotopy->require_subcommand(1);
  auto* hfrom = homotopy->add_subcommand("from-se", "Homotopy shift equivalence of a witness");
  hfrom->add_option("--witness", witness_path, "Witness JSON")->required();
  hfrom->add_option("--steps", steps, "Samples per path")->check(CLI::Range(2u, 100000u));
  hfrom->add_option("--out", out_path, "Write bundle.json here");
  hfrom->callback([&] {
    action = [&] {
      const SEWitness w = witness_from_json(ctx.document("witness", witness_path));
      const HomotopyShiftBundle b = homotopy_shift_equivalence_from_se(w, steps);
      const HomotopyReport hx = check_homotopy(b.x_homotopy, ctx.tol);
      const HomotopyReport hy = check_homotopy(b.y_homotopy, ctx.tol);
      Outcome o;
      o.verdict["steps"] = steps;
      o.verdict["x_homotopy"] = homotopy_report_json(hx);
      o.verdict["y_homotopy"] = homotopy_report_json(hy);
      if (!out_path.empty()) write_json_file(out_path, bundle_to_json(b));
      o.code = hx.ok && hy.ok ? kOk : kRefuted;
      return o;
    };
  });

  // selftest
  std::vector<int> only;
  std::string golden = default_golden_path();
  auto* self = app.add_subcommand("selftest", "Run the acceptance criteria");
  self->add_option("--only", only, "Criterion numbers to run")->check(CLI::Range(1, 9));
  self->add_option("--golden", golden, "Bowen-Franks golden file");
  self->callback([&] {
    action = [&] {
      const auto results =
          run_selftest(default_oracles(golden), SelftestOptions{ctx.tol, only});
      Outcome o;
      Json list = Json::array();
      bool all = true;
      for (const auto& r : results) {
        Json item{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}};
        if (ctx.timing) item["seconds"] = r.seconds;
        list.push_back(std::move(item));
        all = all && r.passed;
        ctx.say("criterion " + std::to_string(r.id) + (r.passed ? " PASS " : " FAIL ") +
                r.name + ": " + r.detail);
      }
      o.verdict["all_passed"] = all;
      o.verdict["criteria"] = std::move(list);
      o.code = all ? kOk : kRefuted;
      return o;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  for (const CLI::App* sub = &app;;) {
    const auto subs = sub->get_subcommands();
    if (subs.empty()) break;
    sub = subs.front();
    ctx.command += (ctx.command.empty() ? "" : " ") + sub->get_name();
  }

  if (tol_flag > 0) {
    ctx.tol = tol_flag;
  } else if (const char* env = std::getenv("SHIFTCALC_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) {
      err << "usage error: SHIFTCALC_TOL must be a positive number\n";
      return kUsage;
    }
    ctx.tol = v;
  }

  Json report{{"schema", kSchema}, {"command", ctx.command}};
  const auto start = std::chrono::steady_clock::now();
  int code = kOk;
  try {
    if (!action) throw UsageError("no command given");
    Outcome o = action();
    code = o.code;
    report["inputs"] = ctx.inputs;
    report["tolerance"] = ctx.tol;
    report["verdict"] = std::move(o.verdict);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    code = kDataError;
    report["inputs"] = ctx.inputs;
    report["tolerance"] = ctx.tol;
    report["error"] = e.what();
    err << "error: " << e.what() << '\n';
  }
  report["exit_code"] = code;
  if (ctx.timing)
    report["seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << report.dump(2) << '\n';
  return code;
}

}  // namespace shiftcalc::cli
