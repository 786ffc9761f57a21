#include <catch2/catch_amalgamated.hpp>

#include <framelab/json_io.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using framelab::ojson;

namespace {

std::string cli_path() {
  const char* p = std::getenv("FRAMELAB_CLI");
  REQUIRE(p != nullptr);
  return p;
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("framelab_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
  std::string cmd = "\"" + cli_path() + "\" " + args;
  if (!stdout_file.empty()) cmd += " > \"" + stdout_file.string() + "\"";
  cmd += " 2> /dev/null";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
  REQUIRE(f.good());
}

ojson slurp_json(const fs::path& p) { return ojson::parse(slurp(p)); }

// U = (0), A = (1) in one dimension: the combined family at c is the single
// vector (c), so the determinant polynomial is c^2.
const char* kScalarInstance = R"({
  "case": "hilbert", "field": "R", "l": 1,
  "U": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[0.0]]}],
  "A": [{"case": "hilbert", "field": "R", "n": 1, "vectors": [[1.0]]}]
})";

}  // namespace

TEST_CASE("gen produces a parseable family and classify reports its kind") {
  fs::path fam = work_dir() / "fam.json";
  fs::path rep = work_dir() / "fam_classify.json";
  REQUIRE(run_cli("gen --case hilbert --field R --n 2 --N 5 --seed 3 --out \"" +
                  fam.string() + "\"") == 0);
  ojson doc = slurp_json(fam);
  CHECK(doc.at("case") == "hilbert");
  CHECK(doc.at("n") == 2);

  REQUIRE(run_cli("classify \"" + fam.string() + "\" --out \"" + rep.string() +
                  "\" --deterministic") == 0);
  ojson report = slurp_json(rep);
  CHECK(report.at("tool") == "framelab");
  CHECK(report.at("command") == "classify");
  CHECK(!report.contains("timestamp"));
  CHECK(report.at("classification").contains("kind"));
}

TEST_CASE("gen --tight yields a Parseval family at constant one") {
  fs::path fam = work_dir() / "tight.json";
  fs::path rep = work_dir() / "tight_classify.json";
  REQUIRE(run_cli("gen --case hilbert --field C --n 2 --N 6 --seed 9 --tight --a 1 "
                  "--out \"" + fam.string() + "\"") == 0);
  REQUIRE(run_cli("classify \"" + fam.string() + "\" --out \"" + rep.string() + "\"") == 0);
  CHECK(slurp_json(rep).at("classification").at("kind") == "parseval_frame");
}

TEST_CASE("gen rejects infeasible frame requests with exit code 2") {
  CHECK(run_cli("gen --case hilbert --n 5 --N 3 --frame") == 2);
}

TEST_CASE("classify rejects malformed input with exit code 2") {
  fs::path bad = work_dir() / "bad.json";
  spit(bad, "{\"case\": \"hilbert\"");
  CHECK(run_cli("classify \"" + bad.string() + "\"") == 2);
  spit(bad, "{\"case\": \"banach\", \"field\": \"R\"}");
  CHECK(run_cli("classify \"" + bad.string() + "\"") == 2);
}

TEST_CASE("membership, verify, and measure run on a generated instance") {
  fs::path inst = work_dir() / "inst.json";
  REQUIRE(run_cli("gen --case hilbert --field R --n 2 --N 4 --l 2 --seed 11 --out \"" +
                  inst.string() + "\"") == 0);

  fs::path mem = work_dir() / "mem.json";
  REQUIRE(run_cli("membership \"" + inst.string() + "\" --c 0.3,-0.4 --out \"" +
                  mem.string() + "\"") == 0);
  ojson m = slurp_json(mem);
  CHECK(m.at("membership").at("per_index").size() == 2);
  CHECK(m.at("membership").at("per_index")[0].at("index") == 1);

  fs::path ver = work_dir() / "ver.json";
  REQUIRE(run_cli("verify \"" + inst.string() +
                  "\" --samples 400 --seed 5 --deterministic --out \"" +
                  ver.string() + "\"") == 0);
  ojson v = slurp_json(ver);
  CHECK(v.at("biconditional").at("disagreements") == 0);
  CHECK(v.at("biconditional").at("all_agree") == true);

  fs::path mes = work_dir() / "mes.json";
  REQUIRE(run_cli("measure \"" + inst.string() +
                  "\" --samples 400 --seed 5 --deterministic --out \"" +
                  mes.string() + "\"") == 0);
  CHECK(slurp_json(mes).at("measure").at("samples") == 400);
}

TEST_CASE("deterministic reruns are byte-identical") {
  fs::path inst = work_dir() / "det_inst.json";
  REQUIRE(run_cli("gen --case cstar --field C --signature 2,1 --N 4 --l 1 --seed 21 "
                  "--out \"" + inst.string() + "\"") == 0);
  fs::path a = work_dir() / "det_a.json";
  fs::path b = work_dir() / "det_b.json";
  std::string args = "verify \"" + inst.string() + "\" --samples 300 --seed 8 "
                     "--deterministic --out \"";
  REQUIRE(run_cli(args + a.string() + "\"") == 0);
  REQUIRE(run_cli(args + b.string() + "\"") == 0);
  CHECK(slurp(a) == slurp(b));

  // Regenerating the instance itself is also byte-stable.
  fs::path inst2 = work_dir() / "det_inst2.json";
  REQUIRE(run_cli("gen --case cstar --field C --signature 2,1 --N 4 --l 1 --seed 21 "
                  "--out \"" + inst2.string() + "\"") == 0);
  CHECK(slurp(inst) == slurp(inst2));
}

TEST_CASE("verify exits 1 when verdicts and determinant signs are made to disagree") {
  // An absurd classification tolerance declares well-conditioned frames
  // "failed" while their determinants stay positive, which is exactly the
  // disagreement the exit code reports.
  fs::path inst = work_dir() / "loose.json";
  spit(inst, kScalarInstance);
  CHECK(run_cli("verify \"" + inst.string() + "\" --samples 200 --seed 3 --tol 0.5") == 1);
}

TEST_CASE("interp recovers the squared-coordinate polynomial") {
  fs::path inst = work_dir() / "scalar.json";
  spit(inst, kScalarInstance);
  fs::path rep = work_dir() / "interp.json";
  REQUIRE(run_cli("interp \"" + inst.string() + "\" --e 1 --out \"" + rep.string() +
                  "\" --deterministic") == 0);
  ojson blocks = slurp_json(rep).at("blocks");
  REQUIRE(blocks.size() == 1);
  CHECK(blocks[0].at("validation_error").get<double>() < 1e-8);
  bool found = false;
  for (const auto& term : blocks[0].at("terms")) {
    if (term.at("alpha") == ojson::array({2})) {
      found = true;
      CHECK(term.at("coefficient").get<double>() == Catch::Approx(1.0).margin(1e-8));
    } else {
      CHECK(std::abs(term.at("coefficient").get<double>()) < 1e-8);
    }
  }
  CHECK(found);
}

TEST_CASE("interp rejects complex instances with exit code 2") {
  fs::path inst = work_dir() / "cplx_inst.json";
  REQUIRE(run_cli("gen --case hilbert --field C --n 2 --N 4 --l 1 --seed 31 --out \"" +
                  inst.string() + "\"") == 0);
  CHECK(run_cli("interp \"" + inst.string() + "\" --e 1") == 2);
}

TEST_CASE("slice writes the documented CSV grid") {
  fs::path inst = work_dir() / "slice_inst.json";
  REQUIRE(run_cli("gen --case hilbert --field R --n 2 --N 4 --l 2 --seed 41 --out \"" +
                  inst.string() + "\"") == 0);
  fs::path csv = work_dir() / "slice.csv";
  REQUIRE(run_cli("slice \"" + inst.string() + "\" --axes 1,2 --grid 3x3 --out \"" +
                  csv.string() + "\"") == 0);
  std::istringstream is(slurp(csv));
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "ci,cj,min_value,verdict");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 9);

  fs::path js = work_dir() / "slice.json";
  REQUIRE(run_cli("slice \"" + inst.string() + "\" --axes 1,2 --grid 3x3 --format json "
                  "--deterministic --out \"" + js.string() + "\"") == 0);
  ojson sj = slurp_json(js);
  CHECK(sj.at("slice").at("cells").size() == 9);
  CHECK(sj.at("slice").at("axis_i") == 1);
}

TEST_CASE("doubled instances verify cleanly") {
  fs::path inst = work_dir() / "doubled.json";
  REQUIRE(run_cli("gen --case module --field R --summands 1x2 --N 5 --l 1 --seed 51 "
                  "--doubled --out \"" + inst.string() + "\"") == 0);
  CHECK(run_cli("verify \"" + inst.string() + "\" --samples 300 --seed 2") == 0);
}

TEST_CASE("module families accept sampled probes and other cases reject them") {
  fs::path fam = work_dir() / "mod_fam.json";
  REQUIRE(run_cli("gen --case module --field C --summands 1x2,2x2 --N 6 --seed 61 "
                  "--frame --out \"" + fam.string() + "\"") == 0);
  fs::path rep = work_dir() / "mod_classify.json";
  REQUIRE(run_cli("classify \"" + fam.string() + "\" --probes 40 --seed 7 --out \"" +
                  rep.string() + "\"") == 0);
  ojson r = slurp_json(rep);
  CHECK(r.at("sampled").at("frame_verdict") == true);
  CHECK(r.at("sampled").at("violations") == 0);
  CHECK(r.at("sampled").at("note").get<std::string>().find("not a proof") !=
        std::string::npos);

  fs::path hfam = work_dir() / "h_fam.json";
  REQUIRE(run_cli("gen --case hilbert --n 2 --N 4 --seed 62 --out \"" + hfam.string() +
                  "\"") == 0);
  CHECK(run_cli("classify \"" + hfam.string() + "\" --probes 10") == 2);
}

TEST_CASE("complex tuples parse in membership queries") {
  fs::path inst = work_dir() / "c_inst.json";
  REQUIRE(run_cli("gen --case hilbert --field C --n 2 --N 4 --l 2 --seed 71 --out \"" +
                  inst.string() + "\"") == 0);
  CHECK(run_cli("membership \"" + inst.string() + "\" --c 0.1+0.2i,-0.3i") == 0);
  // A complex tuple against a real instance is invalid input.
  fs::path rinst = work_dir() / "r_inst.json";
  REQUIRE(run_cli("gen --case hilbert --field R --n 2 --N 4 --l 2 --seed 72 --out \"" +
                  rinst.string() + "\"") == 0);
  CHECK(run_cli("membership \"" + rinst.string() + "\" --c 0.1+0.2i,-0.3i") == 2);
}
