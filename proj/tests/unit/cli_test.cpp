#include <filesystem>
#include <fstream>
#include <sstream>

#include "advisor/cli.hpp"
#include "doctest.h"
#include "support/service_driver.hpp"

using namespace advisor;
using namespace advisor::cli;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  std::ostringstream out, err;
  std::istringstream in(input);
  Run r;
  r.code = run_cli(args, out, err, in);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string src(const std::string& rel) { return (fs::path(ADVISOR_SOURCE_DIR) / rel).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path = testing::fresh_temp_dir("advisor-cli");
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("usage errors exit 64") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"advise"}).code == kExitUsage);
  CHECK(run({"advise", "--in", "x", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("advise the boundary student") {
  TempDir tmp;
  const auto out_file = (tmp.path / "report.txt").string();
  auto r = run({"advise", "--in", src("tests/golden/boundary-student.in"), "--out", out_file});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "Mathematics: accepted, recommended\n1 faculty accepted\n");
  CHECK(slurp(out_file) == slurp(src("tests/golden/boundary-student.out")));

  r = run({"advise", "--in", src("tests/golden/boundary-student.in"), "--format", "raw"});
  CHECK(r.out == slurp(src("tests/golden/boundary-student.out")));
  r = run({"advise", "--in", src("tests/golden/boundary-student.in"), "--format", "json"});
  const auto j = testing::json::parse(r.out);
  CHECK(j.at("verdicts").at(0).at("faculty") == "Mathematics");
}

TEST_CASE("advise failures") {
  TempDir tmp;
  auto r = run({"advise", "--in", (tmp.path / "absent.txt").string()});
  CHECK(r.code == kExitRuntime);
  const auto short_in = tmp.write("short.txt", "1 Ali 19 60 Science 2009 80 60 60 60 0 80\n");
  r = run({"advise", "--in", short_in});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("malformed") != std::string::npos);
  const auto bad_kb = tmp.write("bad.clp", "(defrule r (student (stdid ?s)) => (printout t ?nope))\n");
  r = run({"advise", "--in", src("tests/golden/boundary-student.in"), "--kb", src("kb/student.clp"), "--kb", bad_kb});
  CHECK(r.code == kExitDiagnostics);
  CHECK(r.err.find("UnboundVariable") != std::string::npos);
}

TEST_CASE("advise with compiled criteria") {
  TempDir tmp;
  const auto rules = (tmp.path / "faculties.clp").string();
  REQUIRE(run({"kb", "compile", src("criteria/sample-faculties.ini"), "--out", rules}).code == kExitOk);
  const auto in = tmp.write("in.txt", "7 Sara 18 70 Science 2010 75 70 71 70 80 72 40\n");
  const auto r = run({"advise", "--in", in, "--kb", src("kb/student.clp"), "--kb", src("kb/readtextfiledata.clp"),
                      "--kb", rules});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("ComputerScience: accepted, recommended\n") != std::string::npos);
  CHECK(r.out.find("Biology: accepted, not recommended\n") != std::string::npos);
  CHECK(r.out.find("Physics: accepted, recommended\n") != std::string::npos);
  CHECK(r.out.find("3 faculties accepted\n") != std::string::npos);
}

TEST_CASE("engine run") {
  TempDir tmp;
  auto ok = tmp.write("ok.clp", "(defrule hello => (printout t \"hi\" crlf))\n");
  auto r = run({"engine", "run", ok});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "hi\r\n");
  auto unbound = tmp.write("u.clp", "(defrule u => (printout t ?x))\n");
  r = run({"engine", "run", unbound});
  CHECK(r.code == kExitDiagnostics);
  CHECK(r.err.find("u.clp") != std::string::npos);
  auto syntax = tmp.write("s.clp", "(defrule s\n  (a ?x\n");
  CHECK(run({"engine", "run", syntax}).code == kExitDiagnostics);
  auto router = tmp.write("r.clp", "(defrule s => (printout nowhere \"x\"))\n");
  r = run({"engine", "run", router});
  CHECK(r.code == kExitRuntime);
  CHECK(r.err.find("RouterNotOpen") != std::string::npos);
  CHECK(run({"engine", "run", (tmp.path / "absent.clp").string()}).code == kExitRuntime);

  auto reader = tmp.write("read.clp", "(defrule r => (bind ?v (read)) (printout t ?v crlf))\n");
  r = run({"engine", "run", reader}, "42\n");
  CHECK(r.out == "42\r\n");

  tmp.write("data.txt", "x y\n");
  auto files = tmp.write("f.clp",
                         "(defrule f => (open \"data.txt\" in \"r\") (printout t (read in) crlf))\n");
  r = run({"engine", "run", files, "--input-dir", tmp.path.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "x\r\n");
}

TEST_CASE("kb compile") {
  TempDir tmp;
  auto r = run({"kb", "compile", src("criteria/mathematics.ini")});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("(defrule fo-Mathematics") == 0);
  const auto empty = tmp.write("empty.ini", "# nothing yet\n");
  r = run({"kb", "compile", empty});
  CHECK(r.code == kExitOk);
  CHECK(r.out.empty());
  CHECK(r.err.find("warning") != std::string::npos);
  const auto bad = tmp.write("bad.ini", "[F]\nmin-academic-per = 60\nacademic-type = Science\n"
                                        "min-hssc-year = 2009\ngate.ability-test-art-per = 1\n");
  r = run({"kb", "compile", bad});
  CHECK(r.code == kExitDiagnostics);
  CHECK(r.err.find("UnknownGateField") != std::string::npos);
  CHECK(run({"kb", "compile", (tmp.path / "absent.ini").string()}).code == kExitRuntime);
}

TEST_CASE("bank check") {
  TempDir tmp;
  auto r = run({"bank", "check", src("data/sample-bank.txt"), "--seed", "4"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("Intelligence 70\n") != std::string::npos);
  CHECK(r.out.find("draw Biology: 100 ability, 50 intelligence") != std::string::npos);
  const auto small = tmp.write("small.txt", "a|English|p|x;y|0\n");
  r = run({"bank", "check", small});
  CHECK(r.code == kExitDiagnostics);
  CHECK(r.err.find("InsufficientQuestions") != std::string::npos);
  CHECK(run({"bank", "check", (tmp.path / "absent.txt").string()}).code == kExitRuntime);
}

TEST_CASE("serve rejects bad configs") {
  TempDir tmp;
  CHECK(run({"serve", "--config", (tmp.path / "absent.json").string()}).code == kExitDiagnostics);
  const auto cfg = tmp.write("c.json", R"({"bank": "missing-bank.txt"})");
  CHECK(run({"serve", "--config", cfg}).code == kExitDiagnostics);
}
