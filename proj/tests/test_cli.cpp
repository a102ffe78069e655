#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "llx");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = llx::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string corpus(const std::string& name) { return std::string(LLX_CORPUS_DIR) + "/" + name + ".lam"; }

fs::path scratch_file(const std::string& name, const std::string& content) {
  fs::path dir = fs::temp_directory_path() / "llx_cli_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("cli examples") {
  Result p = run({"productive", corpus("nonunfoldable")});
  CHECK(p.code == 1);
  CHECK(p.out.find("UNPRODUCTIVE") != std::string::npos);
  CHECK(p.out.find("rec") != std::string::npos);

  Result e = run({"equal", corpus("stream1"), corpus("stream2")});
  CHECK(e.code == 0);
  CHECK(e.out == "EQUAL\n");

  Result u = run({"unfold", corpus("fyx"), "--depth", "4"});
  CHECK(u.code == 0);
  CHECK(u.out == "\\a b. (_ b) a\n");
}

TEST_CASE("cli verdicts and exit codes") {
  CHECK(run({"check", corpus("fyx")}).code == 0);
  CHECK(run({"productive", corpus("fyx")}).code == 0);
  CHECK(run({"productive", corpus("guard_productive")}).code == 0);
  CHECK(run({"productive", corpus("guard_unproductive")}).code == 1);
  CHECK(run({"unfold", corpus("blackhole"), "--depth", "3"}).code == 1);
  Result bottom = run({"unfold", corpus("blackhole"), "--depth", "3", "--bottom"});
  CHECK(bottom.code == 0);
  CHECK(bottom.out == "!\n");

  Result d = run({"equal", corpus("identity"), corpus("selfapp")});
  CHECK(d.code == 1);
  CHECK(d.out.rfind("DISTINGUISHED", 0) == 0);

  Result c = run({"classify", corpus("entangled")});
  CHECK(c.code == 1);
  CHECK(c.out.find("REGULAR_NOT_STRONG") != std::string::npos);
  CHECK(run({"classify", corpus("fstream")}).code == 0);
  CHECK(run({"classify", corpus("unused_param")}).code == 0);
  CHECK(run({"--bound", "3", "classify", corpus("entangled")}).code == 2);

  Result k = run({"canonicalize", corpus("fyx")});
  CHECK(k.code == 0);
  CHECK(k.out == "letrec u = \\a b. (u b) a in u\n");

  Result ch = run({"chains", corpus("selfapp")});
  CHECK(ch.code == 0);
  CHECK(ch.out.find("ε ◁ 000000 ⊣ 00 ◁ 00001") != std::string::npos);

  Result g = run({"graph", corpus("identity"), "--format", "json"});
  CHECK(g.code == 0);
  CHECK(g.out.find("\"start\":0") != std::string::npos);
  CHECK(run({"graph", corpus("identity"), "--format", "dot"}).out.rfind("digraph", 0) == 0);
  CHECK(run({"graph", corpus("fyx"), "--strategy", "eager-reg"}).code == 0);
}

TEST_CASE("cli errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"unfold", corpus("fyx"), "--depth", "-1"}).code == 2);
  CHECK(run({"--bound", "0", "check", corpus("fyx")}).code == 2);
  CHECK(run({"graph", corpus("fyx"), "--strategy", "sideways"}).code == 2);
  Result missing = run({"check", "/nonexistent/file.lam"});
  CHECK(missing.code == 2);
  CHECK(missing.err.rfind("error: cannot read", 0) == 0);

  Result syntax = run({"check", scratch_file("bad.lam", "\\x. (x").string()});
  CHECK(syntax.code == 2);
  CHECK(syntax.err.find("Syntax") != std::string::npos);
  CHECK(std::count(syntax.err.begin(), syntax.err.end(), '\n') >= 1);

  Result unbound = run({"check", scratch_file("open.lam", "\\x. y").string()});
  CHECK(unbound.code == 2);
  CHECK(unbound.err.find("y") != std::string::npos);

  Result holes = run({"check", scratch_file("holes.lam", "\\x. _").string()});
  CHECK(holes.code == 2);
  CHECK(run({"--allow-holes", "check", scratch_file("holes.lam", "\\x. _").string()}).code == 0);
}

TEST_CASE("LLX_BOUND applies when --bound is absent") {
  ::setenv("LLX_BOUND", "3", 1);
  CHECK(run({"classify", corpus("entangled")}).code == 2);
  CHECK(run({"--bound", "10000", "classify", corpus("entangled")}).code == 1);
  ::setenv("LLX_BOUND", "junk", 1);
  CHECK(run({"classify", corpus("entangled")}).code == 2);
  ::unsetenv("LLX_BOUND");
  CHECK(run({"classify", corpus("entangled")}).code == 1);
}

TEST_CASE("cli output is deterministic") {
  std::vector<std::vector<std::string>> cmds;
  for (const auto& e : fs::directory_iterator(LLX_CORPUS_DIR)) {
    std::string f = e.path().string();
    for (const char* sub : {"check", "productive", "unfold", "graph", "chains", "classify", "canonicalize"})
      cmds.push_back({sub, f});
    cmds.push_back({"--seed", "99", "unfold", f, "--trace", "--depth", "5"});
  }
  for (const auto& c : cmds) {
    Result a = run(c), b = run(c);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
  }
}

TEST_CASE("fuzz: random bytes never crash the front end") {
  std::mt19937_64 rng(71);
  const std::string alphabet = "\\.()=,;#_!λ xyzfgdefmainletrecin\n\t";
  fs::path p = scratch_file("fuzz.lam", "");
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    int len = std::uniform_int_distribution<int>(0, 40)(rng);
    for (int k = 0; k < len; ++k) {
      if (i % 2) s += static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
      else s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    std::ofstream(p, std::ios::binary | std::ios::trunc) << s;
    Result r = run({"check", p.string()});
    CAPTURE(s);
    CHECK((r.code == 0 || r.code == 2));
    CHECK(r.err.find("internal") == std::string::npos);
  }
}

TEST_CASE("fuzz: mutated corpus terms") {
  std::mt19937_64 rng(72);
  std::vector<std::string> sources;
  for (const auto& e : fs::directory_iterator(LLX_CORPUS_DIR)) {
    std::ifstream in(e.path());
    std::stringstream ss;
    ss << in.rdbuf();
    sources.push_back(ss.str());
  }
  fs::path p = scratch_file("mutant.lam", "");
  for (int i = 0; i < 1000; ++i) {
    std::string s = sources[std::uniform_int_distribution<std::size_t>(0, sources.size() - 1)(rng)];
    int edits = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < edits && !s.empty(); ++k) {
      std::size_t at = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: s.erase(at, 1); break;
        case 1: s.insert(at, 1, "xyfr()\\. "[at % 9]); break;
        default: std::swap(s[at], s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)]);
      }
    }
    std::ofstream(p, std::ios::binary | std::ios::trunc) << s;
    for (const char* sub : {"check", "productive", "canonicalize"}) {
      Result r = run({"--bound", "500", sub, p.string()});
      CAPTURE(s);
      CHECK(r.code >= 0);
      CHECK(r.code <= 2);
      CHECK(r.err.find("internal") == std::string::npos);
    }
  }
}
