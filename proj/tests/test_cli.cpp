#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "cpdk/io.hpp"

// End-to-end runs of the installed binary; everything goes through a shell so
// the tests see exactly what a user sees.

namespace {

using nlohmann::json;

std::filesystem::path work_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "cpdk_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  const auto dir = work_dir();
  const auto out_file = dir / "stdout.txt";
  const auto err_file = dir / "stderr.txt";
  const std::string cmd = std::string(CPDK_CLI_PATH) + " " + args + " > " + out_file.string() +
                          " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string demo_file(const std::string& name, const std::string& extra = "") {
  const auto path = work_dir() / (name + ".json");
  const RunResult r = run_cli("examples " + name + " -o " + path.string() + extra);
  REQUIRE(r.code == 0);
  return path.string();
}

}  // namespace

TEST_CASE("demo systems generate, validate, and report their rank") {
  const std::string fock = demo_file("fock-demo");
  const RunResult v = run_cli("validate " + fock);
  CHECK(v.code == 0);
  const json vdoc = json::parse(v.out);
  CHECK(vdoc["pass"].get<bool>());
  CHECK(vdoc["suites"]["ccpd"]["pass"].get<bool>());
  CHECK(v.err.find("PASS") != std::string::npos);

  const RunResult ix = run_cli("index " + fock);
  CHECK(ix.code == 0);
  CHECK(json::parse(ix.out)["numerical_rank"].get<int>() == 4);

  const std::string twisted = demo_file("twisted-demo");
  CHECK(run_cli("validate " + twisted).code == 0);
  const RunResult tx = run_cli("index " + twisted);
  CHECK(tx.code == 0);
  const json tdoc = json::parse(tx.out);
  CHECK(tdoc["numerical_rank"].get<int>() == 0);
  for (const json& flag : tdoc["null_mask"]) CHECK(flag.get<bool>());
}

TEST_CASE("expression arguments reach the rank computation") {
  const std::string fock = demo_file("fock-demo");
  const RunResult one = run_cli("index " + fock + " --exprs \"(base u1)\"");
  CHECK(one.code == 0);
  CHECK(json::parse(one.out)["numerical_rank"].get<int>() == 2);

  const RunResult sum =
      run_cli("index " + fock + " --exprs \"(base u1)\" \"(add (base u1) (base u2))\"");
  CHECK(sum.code == 0);
  CHECK(json::parse(sum.out)["numerical_rank"].get<int>() == 4);

  // Shifting an expression never changes its rank.
  cpdk::AlgebraElement gamma = cpdk::zero_element(cpdk::AlgebraDescriptor({2}));
  gamma.blocks[0](0, 0) = cpdk::Complex(0.5, 0.25);
  gamma.blocks[0](1, 0) = cpdk::Complex(-0.125, 0);
  const RunResult shifted = run_cli("index " + fock + " --exprs \"(shift (base u1) " +
                                    cpdk::element_to_json(gamma).dump() + ")\"");
  CHECK(shifted.code == 0);
  CHECK(json::parse(shifted.out)["numerical_rank"].get<int>() ==
        json::parse(one.out)["numerical_rank"].get<int>());

  const RunResult bad = run_cli("index " + fock + " --exprs \"(base nope)\"");
  CHECK(bad.code == 2);
  CHECK(bad.err.find("nope") != std::string::npos);

  const RunResult unparsable = run_cli("index " + fock + " --exprs \"(base u1\"");
  CHECK(unparsable.code == 2);
}

TEST_CASE("random demo files are reproducible") {
  const auto p1 = work_dir() / "r1.json";
  const auto p2 = work_dir() / "r2.json";
  REQUIRE(run_cli("examples random-ce -o " + p1.string() + " --seed 11").code == 0);
  REQUIRE(run_cli("examples random-ce -o " + p2.string() + " --seed 11").code == 0);
  CHECK(slurp(p1) == slurp(p2));

  const auto p3 = work_dir() / "r3.json";
  REQUIRE(run_cli("examples random-ce -o " + p3.string() + " --seed 12").code == 0);
  CHECK(slurp(p1) != slurp(p3));

  CHECK(run_cli("validate " + p1.string()).code == 0);
}

TEST_CASE("tensor of two files validates") {
  const std::string fock = demo_file("fock-demo");
  const auto small = work_dir() / "small.json";
  REQUIRE(run_cli("examples random-ce -o " + small.string() + " --seed 5").code == 0);
  const auto out = work_dir() / "product.json";
  const RunResult t =
      run_cli("tensor " + fock + " " + small.string() + " -o " + out.string());
  CHECK(t.code == 0);
  CHECK(json::parse(t.out)["labels"].get<int>() > 0);
  CHECK(run_cli("validate " + out.string() + " --samples 40").code == 0);
}

TEST_CASE("failures map to distinct exit codes") {
  const auto dir = work_dir();

  const RunResult missing = run_cli("validate " + (dir / "no_such_file.json").string());
  CHECK(missing.code == 3);

  const auto garbage = dir / "garbage.json";
  {
    std::ofstream f(garbage);
    f << "{oops";
  }
  CHECK(run_cli("validate " + garbage.string()).code == 2);

  // One kernel overwritten with its partner: loads, but the swap check fails.
  json doc = cpdk::system_to_json(cpdk::random_ce_system(cpdk::AlgebraDescriptor({2}), 2, 3, 11));
  doc["kernels"]["u2,u1"] = doc["kernels"]["u1,u2"];
  const auto broken = dir / "broken.json";
  {
    std::ofstream f(broken);
    f << doc.dump(1);
  }
  const RunResult v = run_cli("validate " + broken.string());
  CHECK(v.code == 1);
  CHECK_FALSE(json::parse(v.out)["suites"]["symmetry"]["pass"].get<bool>());

  CHECK(run_cli("examples unknown-demo -o " + (dir / "x.json").string()).code == 2);
  CHECK(run_cli("index " + garbage.string()).code == 2);
}

TEST_CASE("usage and help behave like a normal tool") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("validate --help").code == 0);
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
}
