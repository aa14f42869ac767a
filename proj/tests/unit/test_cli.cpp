#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "fistab/cli/run.hpp"
#include "fistab/fi/construct.hpp"
#include "fistab/fi/io.hpp"

using json = nlohmann::json;
using namespace fistab;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run sh(const std::string& args, const std::string& stdin_from = "") {
  std::string cmd = std::string(FISTAB_CLI_PATH) + " " + args + " 2>/dev/null";
  if (!stdin_from.empty()) cmd = stdin_from + " | " + cmd;
  Run r;
  FILE* f = popen(cmd.c_str(), "r");
  REQUIRE(f);
  char buf[4096];
  std::size_t k;
  while ((k = fread(buf, 1, sizeof buf, f)) > 0) r.out.append(buf, k);
  const int st = pclose(f);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::string tmp(const std::string& name) { return "/tmp/fistab_test_cli_" + name; }

void write(const std::string& path, const std::string& s) { std::ofstream(path) << s; }

// Reports are deterministic apart from timing fields.
json strip_timings(json j) {
  if (j.is_object()) {
    j.erase("timings");
    j.erase("seconds");
    for (auto& [k, v] : j.items()) v = strip_timings(v);
  } else if (j.is_array()) {
    for (auto& v : j) v = strip_timings(v);
  }
  return j;
}

}  // namespace

TEST_CASE("documented command examples") {
  auto d = sh("verify theoremD --p 2 --ell 2 --k 1");
  CHECK(d.code == 0);
  CHECK(d.out.find("has dimension 3") != std::string::npos);

  auto b = sh("bounds congruence --d 0 --k 1");
  CHECK(b.code == 0);
  CHECK(b.out.find("(2, 8, 11, 20)") != std::string::npos);

  write(tmp("bad.json"), "{\"kind\": \"fi_module\", \"p\": 2,");
  CHECK(sh("fimod invariants " + tmp("bad.json")).code == 2);
}

TEST_CASE("exit codes") {
  CHECK(sh("").code == 2);
  CHECK(sh("nosuch").code == 2);
  CHECK(sh("bounds congruence --d 0").code == 2);
  CHECK(sh("bounds congruence --d -1 --k 1").code == 2);
  CHECK(sh("fimod invariants /nonexistent/file.json").code == 2);
  CHECK(sh("verify theoremD --p 4 --ell 2 --k 1").code == 2);
  CHECK(sh("--max-cells 10 spb homology --m 4 --q 2 --n 3").code == 3);
  CHECK(sh("cong group --m 64 --q 2 --n 4").code == 3);
  CHECK(sh("--help").code == 0);
  CHECK(sh("--version").out.find(fistab::cli::kVersion) != std::string::npos);

  // a module whose transposition does not square to the identity
  auto M = fi::encode(fi::free_module(3, 1, 3));
  M["levels"][2]["transpositions"][0][0][0] = 2;
  write(tmp("broken.json"), M.dump());
  CHECK(sh("fimod validate " + tmp("broken.json")).code == 1);
  write(tmp("good.json"), fi::encode(fi::free_module(3, 1, 3)).dump());
  CHECK(sh("fimod validate " + tmp("good.json")).code == 0);

  // wrong shapes are input errors, not crashes
  auto S = fi::encode(fi::free_module(3, 1, 3));
  S["levels"][2]["dim"] = 5;
  write(tmp("shape.json"), S.dump());
  CHECK(sh("fimod invariants " + tmp("shape.json")).code == 2);
  write(tmp("kind.json"), R"({"kind": "simplicial", "vertices": [0], "maximal": [[0]]})");
  CHECK(sh("fimod invariants " + tmp("kind.json")).code == 2);
}

TEST_CASE("H_k output feeds fimod invariants") {
  auto r = sh("fimod invariants - --json", std::string(FISTAB_CLI_PATH) + " cong hk --k 1 --p 2 --N 6");
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["outputs"]["t0"] == 2);
  CHECK(j["outputs"]["delta"] == 2);

  CHECK(sh("cong hk --k 3 --p 2 --N 4").code == 2);
  CHECK(sh("cong appB --k 1 --p 2 --N 6").code == 0);
  CHECK(sh("cong theoremC --p 2 --n 2 --k 1").code == 0);
}

TEST_CASE("randomized commands need a seed and are reproducible") {
  CHECK(sh("fimod construct random --p 3 --N 5").code == 2);
  CHECK(sh("bounds audit --modules 2 --maps 0 --complexes 0").code == 2);
  const auto a = sh("--seed 11 fimod construct random --p 3 --N 5 --gen-deg 2 --rel-deg 3");
  const auto b = sh("fimod construct random --p 3 --N 5 --gen-deg 2 --rel-deg 3 --seed 11");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(fi::validate(fi::decode_fi_module(json::parse(a.out))).pass);

  const auto x = sh("--json --seed 5 bounds audit --modules 4 --maps 2 --complexes 2 --threads 1");
  const auto y = sh("--json --seed 5 bounds audit --modules 4 --maps 2 --complexes 2 --threads 1");
  REQUIRE(x.code == 0);
  CHECK(strip_timings(json::parse(x.out)) == strip_timings(json::parse(y.out)));
  CHECK(json::parse(x.out)["seed"] == 5);
}

TEST_CASE("JSON reports are deterministic modulo timings") {
  for (const std::string cmd : {"verify charney --m 4 --q 2 --n 3", "spb homology --m 4 --q 2 --n 2 --z",
                                "cong group --m 4 --q 2 --n 2 --bar-k 2", "spb verify ygamma --m 4 --q 2 --n 2"}) {
    INFO(cmd);
    const auto a = sh("--json " + cmd), b = sh("--json " + cmd), c = sh(cmd + " --json");
    REQUIRE(a.code == 0);
    const auto ja = json::parse(a.out);
    CHECK(strip_timings(ja).dump() == strip_timings(json::parse(b.out)).dump());
    // the global flag may follow the subcommand; only the command echo differs
    auto x = strip_timings(ja), y = strip_timings(json::parse(c.out));
    x.erase("command");
    y.erase("command");
    CHECK(x == y);
    CHECK(ja.contains("version"));
    CHECK(ja["verdict"] == "ok");
  }
}

TEST_CASE("artifacts round-trip through files") {
  const auto f = tmp("spb.json");
  REQUIRE(sh("spb build --m 4 --q 2 --n 2 --out " + f).code == 0);
  const auto h = sh("--json spb homology " + f);
  REQUIRE(h.code == 0);
  const auto j = json::parse(h.out);
  CHECK(j["outputs"]["betti"]["0"] == 3);
  CHECK(j["outputs"]["betti"]["1"] == 4);

  const auto m = tmp("ind.json");
  REQUIRE(sh("fimod construct induced --p 2 --N 5 --V trivial:1 --V sign:2 --out " + m).code == 0);
  const auto hom = sh("--json fimod homology --i-max 2 " + m);
  REQUIRE(hom.code == 0);
  const auto t = json::parse(hom.out)["outputs"]["table"];
  for (int i = 1; i <= 2; ++i)
    for (const auto& v : t[i]) CHECK(v == 0);
  CHECK(sh("fimod construct induced --p 2 --N 5 --V bogus:1").code == 2);

  const auto sum = sh("fimod construct sum --a " + m + " --b " + m);
  REQUIRE(sum.code == 0);
  CHECK(json::parse(sum.out)["levels"][5]["dim"] == 2 * fi::decode_fi_module(json::parse(std::ifstream(m))).dim(5));
}

TEST_CASE("in-process entry point") {
  std::ostringstream out, err;
  const char* argv[] = {"fistab", "bounds", "typeB", "--a", "2", "--b", "0", "--k", "1", "--step", "1", "2", "3"};
  CHECK(fistab::cli::run(13, argv, out, err) == 0);
  CHECK(out.str().find("step(1, 2, 3) = 6") != std::string::npos);
  fistab::max_cells() = std::size_t{1} << 24;
}
