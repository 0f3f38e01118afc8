#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "generators.hpp"
#include "nodal/catalog.hpp"

using namespace nodal;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) { return "cli_test_" + name; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  f << text;
}

const char* kBand =
    "band{a(1,2,2,0) ~ b(1,2,2,1) - g(2,1) ~ g(1,1) - a(1,1,3,1) ~ b(1,2,3,2) - g(2,2) ~ g(1,2) - b(1,1,2,2) ~ "
    "a(1,1,2,1) - g(1,1) ~ g(2,1) - b(1,2,1,1) ~ a(1,1,1,0) - g(1,0) ~ g(2,0); d=2; lambda=3}";
const char* kString =
    "string{rho(1,1,1) - g(1,1) ~ g(2,1) - b(1,2,3,1) ~ a(1,1,3,0) - g(1,0) ~ g(2,0) - rho(1,2,0)}";

// Text of the complexes only, as parse_complex would re-emit it.
std::string without_comments(const std::string& text) {
  std::istringstream is(text);
  std::string line, out;
  while (std::getline(is, line))
    if (line.rfind("#", 0) != 0) out += line + "\n";
  return out;
}

}  // namespace

TEST_CASE("build emits a complex that parses back bit-exactly") {
  Result r = run({"build", "--window", "0:2:3", kBand});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# check complex=true minimal=true") != std::string::npos);
  auto a = std::make_shared<const NodalAlgebra>(builtin("dihedral"));
  std::string text = without_comments(r.out);
  CHECK(format_complex(parse_complex(text, a->A), "dihedral") == text);
  CHECK(run({"build", "--window", "0:2:3", kBand}).out == r.out);
}

TEST_CASE("validation failures exit with code 2") {
  CHECK(run({"build"}).code == 2);
  CHECK(run({"build", "--field", "Q", kBand}).code == 2);
  CHECK(run({"build", "--field", "12", kBand}).code == 2);
  CHECK(run({"build", "--window", "3:1:2", kBand}).code == 2);
  CHECK(run({"build", "--window", "0:2:0", kBand}).code == 2);
  CHECK(run({"build", "--algebra", "nosuch", kBand}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  Result bad = run({"build", "--window", "0:2:3", "string{rho(1,1,0) ~ rho(1,2,0)}"});
  CHECK(bad.code == 2);
  CHECK_FALSE(bad.err.empty());
}

TEST_CASE("verify reports tampering and non-minimal input") {
  std::string path = temp_path("verify.cx");
  Result built = run({"build", "--window", "0:2:3", kBand, "-o", path});
  REQUIRE(built.code == 0);
  Result ok = run({"verify", path});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("d^2=0 true, minimal true, nondegenerate true") != std::string::npos);
  CHECK(ok.out.find("complex 2") == std::string::npos);

  std::string text = without_comments(run({"build", "--window", "0:2:3", kBand}).out);
  auto pos = text.find("d 1 [0,0] : xy");
  REQUIRE(pos != std::string::npos);
  std::string tampered = text;
  tampered.replace(pos, 14, "d 1 [0,0] : yx");
  write_file(path, tampered);
  Result t = run({"verify", path});
  CHECK(t.code == 2);
  CHECK(t.err.find("nonzero at [") != std::string::npos);

  write_file(path, "complex dihedral\ndegree 1 : 1\ndegree 0 : 1\nd 1 [0,0] : 1\n");
  Result nm = run({"verify", path});
  CHECK(nm.err.find("warning: not minimal") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("triple reports the roundtrip flag") {
  std::string path = temp_path("triple.cx");
  REQUIRE(run({"build", "--window", "0:2:3", kString, "-o", path}).code == 0);
  Result t = run({"triple", "--window", "0:2:3", path});
  CHECK(t.code == 0);
  CHECK(t.out.find("# roundtrip true") != std::string::npos);
  CHECK(t.out.find("bunchrep dihedral") != std::string::npos);
  Result j = run({"triple", "--window", "0:2:3", "--format", "json", path});
  CHECK(nlohmann::json::parse(j.out)["roundtrip"] == true);
  std::remove(path.c_str());
}

TEST_CASE("decompose splits a direct sum into its data") {
  std::string path = temp_path("sum.cx");
  std::string both = run({"build", "--window", "0:2:3", kBand}).out + run({"build", "--window", "0:2:3", kString}).out;
  write_file(path, both);
  Result r = run({"decompose", "--window", "0:2:3", path});
  REQUIRE(r.code == 0);
  auto b = std::make_shared<const Bunch>(dihedral_bunch({0, 2, 3}));
  std::istringstream is(r.out);
  std::vector<Datum> found;
  for (std::string line; std::getline(is, line);) found.push_back(parse_datum(line));
  REQUIRE(found.size() == 2);
  int band = std::holds_alternative<BandDatum>(found[0]) ? 0 : 1;
  CHECK(data_equivalent(*b, found[static_cast<size_t>(band)], parse_datum(kBand)));
  CHECK(data_equivalent(*b, found[static_cast<size_t>(1 - band)], parse_datum(kString)));

  write_file(path, run({"build", "--window", "0:2:3", kString}).out);
  Result one = run({"decompose", "--window", "0:2:3", path});
  CHECK(one.out == std::string(kString) + "\n");

  Datum big = make_band(std::get<BandDatum>(parse_datum(kBand)).w, 17, Fp(3));
  write_file(path, format_rep(rep_from_datum(b, big)));
  Result over = run({"decompose", "--window", "0:2:3", path});
  CHECK(over.code == 3);
  CHECK(over.err.find("desk-scale limit") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("batch build of random data") {
  auto b = std::make_shared<const Bunch>(gelfand_bunch({0, 2, 4}));
  std::mt19937 rng(9001);
  std::string batch;
  int n = 100;
  for (int i = 0; i < n; ++i) batch += datum_str(gen::random_datum(*b, rng, 10)) + "\n";
  std::string path = temp_path("batch.txt");
  write_file(path, batch);
  Result r = run({"build", "--algebra", "gelfand", "--window", "0:2:4", "--input", path});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  size_t count = 0;
  for (size_t p = r.out.find("# check complex=true minimal=true"); p != std::string::npos;
       p = r.out.find("# check complex=true minimal=true", p + 1))
    ++count;
  CHECK(count == static_cast<size_t>(n));
  std::string cx = temp_path("batch.cx");
  write_file(cx, r.out);
  Result v = run({"verify", cx});
  CHECK(v.code == 0);
  std::remove(path.c_str());
  std::remove(cx.c_str());
}

TEST_CASE("catalog output is deterministic and machine readable") {
  Result t = run({"catalog", "--algebra", "gelfand", "--window", "0:1:2"});
  CHECK(t.code == 0);
  CHECK(t.out == run({"catalog", "--algebra", "gelfand", "--window", "0:1:2"}).out);
  CHECK(t.out.find("exceptional{l=2; f=0}") != std::string::npos);
  auto j = nlohmann::json::parse(run({"catalog", "--algebra", "gelfand", "--window", "0:1:2", "--format", "json"}).out);
  std::istringstream is(t.out);
  size_t lines = 0;
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(j.size() == lines);
  CHECK(run({"catalog", "--lambda", "0"}).code == 2);
}
