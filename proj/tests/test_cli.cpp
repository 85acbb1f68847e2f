#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shiftcalc/cli.hpp"
#include "shiftcalc/serialization.hpp"

using namespace shiftcalc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch {
 public:
  Scratch() : dir_(fs::temp_directory_path() / "shiftcalc_cli_test") {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string matrix(const std::string& name, const IntMatrix& m) const {
    return write(name, matrix_to_json(m).dump());
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

bool contains(const std::string& s, const std::string& part) {
  return s.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("compare") {
  Scratch s;
  const auto two = s.matrix("two.json", IntMatrix{{2}});
  const auto three = s.matrix("three.json", IntMatrix{{3}});
  const Result r = run({"compare", "--a", two, "--b", three});
  CHECK(r.code == cli::kDistinguished);
  const Json j = r.report();
  CHECK(j["command"] == "compare");
  CHECK(j["verdict"]["result"] == "Distinguished");
  CHECK(j["verdict"]["separating"][0] == "nonzero_char_poly");
  CHECK(j["exit_code"] == 2);
  CHECK(j["tolerance"] == 1e-9);
  CHECK(j["inputs"]["a"]["sha256"].get<std::string>().size() == 64);
  CHECK_FALSE(j.contains("seconds"));

  const auto full = s.matrix("full.json", IntMatrix{{1, 1}, {1, 1}});
  const Result same = run({"compare", "--a", two, "--b", full});
  CHECK(same.code == cli::kOk);
  CHECK(same.report()["verdict"]["result"] == "Inconclusive");

  // Byte-identical across runs.
  CHECK(run({"compare", "--a", two, "--b", three}).out == r.out);
  CHECK(run({"--timing", "compare", "--a", two, "--b", three}).report().contains("seconds"));
}

TEST_CASE("verify-se") {
  Scratch s;
  const auto a = s.matrix("a.json", IntMatrix{{2}});
  const auto b = s.matrix("b.json", IntMatrix{{1, 1}, {1, 1}});
  const auto r = s.matrix("r.json", IntMatrix{{1, 1}});
  const auto sm = s.matrix("s.json", IntMatrix{{1}, {1}});
  const Result ok = run({"verify-se", "--a", a, "--b", b, "--r", r, "--s", sm, "--lag", "1"});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.report()["verdict"]["verified"] == true);

  const auto bumped = s.matrix("r2.json", IntMatrix{{1, 2}});
  const Result bad =
      run({"verify-se", "--a", a, "--b", b, "--r", bumped, "--s", sm, "--lag", "1"});
  CHECK(bad.code == cli::kRefuted);
  CHECK(contains(bad.err, "A^m = RS"));
  CHECK(bad.report()["verdict"]["failing_equation"] == "A^m = RS");

  const auto id = s.matrix("id.json", IntMatrix{{1, 0}, {0, 1}});
  const auto fib = s.matrix("fib.json", IntMatrix{{1, 1}, {1, 0}});
  CHECK(run({"verify-se", "--a", fib, "--b", fib, "--r", id, "--s", fib, "--lag", "1"}).code ==
        cli::kOk);
}

TEST_CASE("usage and data errors") {
  Scratch s;
  const auto two = s.matrix("two.json", IntMatrix{{2}});
  CHECK(run({"compare", "--a", two, "--no-such-flag"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"compare", "--a", two}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);

  const auto broken = s.write("broken.json", "{\"entries\": [[1,\n 2]");
  const Result e = run({"invariants", "--a", broken});
  CHECK(e.code == cli::kDataError);
  CHECK(contains(e.err, "broken.json:2:"));
  CHECK(e.report()["exit_code"] == 65);

  const auto neg = s.write("neg.json", R"({"entries": [[1, -3]]})");
  const Result n = run({"invariants", "--a", neg});
  CHECK(n.code == cli::kDataError);
  CHECK(contains(n.err, "entry (0,1) is negative"));

  CHECK(run({"invariants", "--a", s.path("missing.json")}).code == cli::kDataError);
}

TEST_CASE("tolerance from the environment") {
  Scratch s;
  const auto two = s.matrix("two.json", IntMatrix{{2}});
  ::setenv("SHIFTCALC_TOL", "1e-6", 1);
  CHECK(run({"invariants", "--a", two}).report()["tolerance"] == 1e-6);
  CHECK(run({"--tol", "1e-3", "invariants", "--a", two}).report()["tolerance"] == 1e-3);
  ::setenv("SHIFTCALC_TOL", "abc", 1);
  CHECK(run({"invariants", "--a", two}).code == cli::kUsage);
  ::unsetenv("SHIFTCALC_TOL");
  CHECK(run({"invariants", "--a", two}).report()["tolerance"] == 1e-9);
}

TEST_CASE("search-se and invariants") {
  Scratch s;
  const auto a = s.matrix("a.json", IntMatrix{{2}});
  const auto b = s.matrix("b.json", IntMatrix{{1, 1}, {1, 1}});
  const auto out = s.path("w.json");
  const Result r = run({"search-se", "--a", a, "--b", b, "--lag", "1", "--bound", "1",
                        "--out", out});
  CHECK(r.code == cli::kOk);
  CHECK(r.report()["verdict"]["found"] == true);
  const SEWitness w = witness_from_json(read_json_file(out));
  CHECK(verify_se(w));

  const auto three = s.matrix("three.json", IntMatrix{{3}});
  CHECK(run({"search-se", "--a", a, "--b", three, "--lag", "2", "--bound", "3"}).code ==
        cli::kRefuted);
  CHECK(run({"-j", "2", "search-se", "--a", a, "--b", b, "--lag", "1", "--bound", "1"}).out ==
        run({"search-se", "--a", a, "--b", b, "--lag", "1", "--bound", "1"}).out);

  const Json inv = run({"invariants", "--a", b}).report()["verdict"];
  CHECK(inv["nonzero_char_poly"]["text"] == "t - 2");
  CHECK(inv["bowen_franks"]["text"] == "0");
}

TEST_CASE("corr tensor") {
  Scratch s;
  const auto r = s.matrix("r.json", IntMatrix{{1, 2}});
  const auto sm = s.matrix("s.json", IntMatrix{{1}, {3}});
  const auto out = s.path("t.json");
  const Result t = run({"corr", "tensor", "--r", r, "--s", sm, "--out", out});
  CHECK(t.code == cli::kOk);
  const Json v = t.report()["verdict"];
  CHECK(t.report()["command"] == "corr tensor");
  CHECK(v["total_dim"] == 7);
  CHECK(v["matches_product"] == true);
  CHECK(correspondence_from_json(read_json_file(out)).dims().to_int() == IntMatrix{{7}});
}

TEST_CASE("aligned and homotopy pipelines") {
  Scratch s;
  const SEWitness w{IntMatrix{{2}}, IntMatrix{{1, 1}, {1, 1}}, IntMatrix{{1, 1}},
                    IntMatrix{{1}, {1}}, 1};
  const auto wpath = s.write("w.json", witness_to_json(w).dump());
  const auto shift = s.path("shift.json");
  const Result built = run({"aligned", "from-se", "--witness", wpath, "--out", shift});
  CHECK(built.code == cli::kOk);
  CHECK(built.report()["verdict"]["concrete"] == true);

  const Result checked = run({"aligned", "verify", "--data", shift});
  CHECK(checked.report()["verdict"]["formulations_agree"] == true);
  CHECK((checked.code == cli::kOk) == checked.report()["verdict"]["aligned"].get<bool>());

  const auto bundle = s.path("bundle.json");
  const Result h = run({"homotopy", "from-se", "--witness", wpath, "--steps", "6", "--out", bundle});
  CHECK(h.code == cli::kOk);
  CHECK(h.report()["verdict"]["x_homotopy"]["ok"] == true);
  CHECK(read_json_file(bundle)["y_homotopy"]["path"]["samples"].size() == 6);

  SEWitness bad = w;
  bad.s(0, 0) = 3;
  const auto bpath = s.write("bad.json", witness_to_json(bad).dump());
  CHECK(run({"homotopy", "from-se", "--witness", bpath}).code == cli::kDataError);
  CHECK(run({"homotopy", "from-se", "--witness", wpath, "--steps", "1"}).code == cli::kUsage);
}

TEST_CASE("selftest subset") {
  const Result r = run({"selftest", "--only", "1"});
  CHECK(r.code == cli::kOk);
  const Json v = r.report()["verdict"];
  CHECK(v["all_passed"] == true);
  REQUIRE(v["criteria"].size() == 1);
  CHECK(v["criteria"][0]["id"] == 1);
  CHECK(run({"selftest", "--only", "10"}).code == cli::kUsage);
}
