#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli() {
  const char* p = std::getenv("QDM_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen-data writes a deterministic dataset and manifest") {
  CHECK(run("gen-data --class ghz --qubits 4 --count 20 --seed 7 --out cli_a.txt") == 0);
  CHECK(run("gen-data --class ghz --qubits 4 --count 20 --seed 7 --out cli_b.txt") == 0);
  CHECK(slurp("cli_a.txt") == slurp("cli_b.txt"));
  CHECK(!slurp("cli_a.txt.manifest.json").empty());
  std::remove("cli_b.txt");
  std::remove("cli_b.txt.manifest.json");
}

TEST_CASE("invalid flags exit with code 2") {
  CHECK(run("gen-data --class ghz --qubits 4 --count 0 --out cli_bad.txt") == 2);
  CHECK(run("gen-data --class dicke --qubits 4 --count 5 --out cli_bad.txt") == 2);
  CHECK(run("nonsense") == 2);
}

TEST_CASE("missing input files exit with code 3") {
  CHECK(run("train --data missing_dataset.txt --out cli_ck.txt --epochs 1") == 3);
  CHECK(run("generate --model missing_model.txt --out cli_g.txt") == 3);
}

TEST_CASE("train, generate, eval, viz pipeline") {
  REQUIRE(run("gen-data --class ghz --qubits 4 --count 10 --seed 7 --out cli_a.txt") == 0);
  CHECK(run("train --data cli_a.txt --epochs 4 --batch 10 --seed 3 "
            "--bridge-reset 3 --input fullnoise --out cli_ck.txt") == 0);
  // byte-identical retrain, also with more workers
  CHECK(run("train --data cli_a.txt --epochs 4 --batch 10 --seed 3 "
            "--bridge-reset 3 --input fullnoise --out cli_ck2.txt --workers 4") == 0);
  CHECK(slurp("cli_ck.txt") == slurp("cli_ck2.txt"));
  std::remove("cli_ck2.txt");
  std::remove("cli_ck2.txt.manifest.json");

  CHECK(run("generate --model cli_ck.txt --count 5 --seed 11 --class ghz "
            "--out cli_states.txt") == 0);
  CHECK(!slurp("cli_states.txt.report.txt").empty());
  // eval recomputes the same Q from the stored states
  CHECK(run("eval --states cli_states.txt --class ghz --out cli_eval.txt") == 0);
  const std::string gen_report = slurp("cli_states.txt.report.txt");
  const std::string eval_report = slurp("cli_eval.txt");
  const auto q_line = [](const std::string& text) {
    const auto pos = text.find("\nQ ");
    return text.substr(pos, text.find('\n', pos + 1) - pos);
  };
  CHECK(q_line(gen_report) == q_line(eval_report));

  CHECK(run("viz --states cli_states.txt --index 0 --out cli_viz.pgm") == 0);
  CHECK(slurp("cli_viz.pgm").rfind("P2\n", 0) == 0);
  CHECK(run("viz --states cli_states.txt --index 99 --out cli_viz.pgm") == 2);

  for (const char* f :
       {"cli_eval.txt", "cli_eval.txt.manifest.json", "cli_viz.pgm",
        "cli_viz.pgm.manifest.json"}) {
    std::remove(f);
  }
}

TEST_CASE("denoise identity channel keeps metrics unchanged") {
  // epsilon-II with p = 0 never rotates; before/after success must agree
  REQUIRE(run("denoise --model cli_ck.txt --data cli_a.txt --noise e2 --p 0 "
              "--eta 0.5 --trajectories 3 --seed 5 --out cli_dn.tsv") == 0);
  std::ifstream in("cli_dn.tsv");
  std::string header;
  std::getline(in, header);
  CHECK(header.find("p_succ_before") != std::string::npos);
  double eta = 0.0;
  int sample = 0;
  double before = 0.0, after = 0.0, fid = 0.0;
  int rows = 0;
  while (in >> eta >> sample >> before >> after >> fid) {
    std::string rest;
    std::getline(in, rest);
    // the model still transforms the state, so only 'before' is exactly
    // the clean success probability
    CHECK(before == doctest::Approx(1.0).epsilon(1e-9));
    ++rows;
  }
  CHECK(rows == 10);
  for (const char* f : {"cli_dn.tsv", "cli_dn.tsv.manifest.json",
                        "cli_dn.tsv.plot.tsv", "cli_a.txt",
                        "cli_a.txt.manifest.json", "cli_ck.txt",
                        "cli_ck.txt.manifest.json", "cli_states.txt",
                        "cli_states.txt.manifest.json", "cli_states.txt.report.txt",
                        "cli_states.txt.plot.tsv"}) {
    std::remove(f);
  }
}

TEST_CASE("eta sweep emits one curve point per level") {
  REQUIRE(run("gen-data --class ghz --qubits 4 --count 3 --seed 2 --out cli_s.txt") == 0);
  REQUIRE(run("train --data cli_s.txt --epochs 2 --batch 3 --seed 3 "
              "--bridge-reset 3 --out cli_sck.txt") == 0);
  REQUIRE(run("denoise --model cli_sck.txt --data cli_s.txt --noise e1 "
              "--eta 0.05,0.15,0.25,0.35 --trajectories 2 --seed 5 "
              "--out cli_sw.tsv") == 0);
  const std::string plot = slurp("cli_sw.tsv.plot.tsv");
  int success_rows = 0;
  std::stringstream ss(plot);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.rfind("success\t", 0) == 0) ++success_rows;
  }
  CHECK(success_rows == 4);
  for (const char* f : {"cli_s.txt", "cli_s.txt.manifest.json", "cli_sck.txt",
                        "cli_sck.txt.manifest.json", "cli_sw.tsv",
                        "cli_sw.tsv.manifest.json", "cli_sw.tsv.plot.tsv"}) {
    std::remove(f);
  }
}
