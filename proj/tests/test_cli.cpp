#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Run {
  int rc = -1;
  std::string out;
  std::string err;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("morphic_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Run run(const std::string& args, const std::string& env = "") {
  const auto out = scratch() / "out.txt";
  const auto err = scratch() / "err.txt";
  const std::string cmd = env + " " + quote(MORPHIC_CLI) + " " + args + " >" + quote(out.string()) + " 2>" +
                          quote(err.string());
  const int status = std::system(cmd.c_str());
  Run r;
  r.rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string sub(const std::string& name) { return "--substitution " + quote(std::string(MORPHIC_DATA_DIR) + "/" + name); }

Json json_of(const Run& r) {
  REQUIRE(r.rc == 0);
  return Json::parse(r.out);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

fs::path write_file(const std::string& name, const std::string& body) {
  const auto p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("analyze reports the structure of the examples") {
  const auto tm = json_of(run("analyze " + sub("thue_morse.sub")));
  CHECK(tm["primitive"] == true);
  CHECK(tm["marked"] == true);
  CHECK(tm["twoFull"] == true);
  CHECK(tm["perron"].get<double>() == doctest::Approx(2.0));
  CHECK(tm["powerFreeBound"] == 3);
  CHECK(tm["recognizabilityLength"] == 3);

  const auto abba = json_of(run("analyze " + sub("abba_bab.sub")));
  CHECK(abba["primitive"] == true);
  CHECK(abba["marked"] == true);
  CHECK(abba["twoFull"] == false);

  const auto per = json_of(run("analyze " + sub("aba_bab.sub")));
  CHECK(per["primitive"] == true);
  CHECK(per["aperiodicEvidence"]["verdict"] == "periodic");
}

TEST_CASE("parse failures report the line and exit with 1") {
  const auto bad = write_file("bad.sub", "0 -> 01\n1 10\n");
  const auto r = run("analyze --substitution " + quote(bad.string()));
  CHECK(r.rc == 1);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(run("analyze --substitution " + quote((scratch() / "missing.sub").string())).rc == 1);
  CHECK(run("analyze").rc == 1);
  CHECK(run("nosuchcommand " + sub("thue_morse.sub")).rc == 1);
  CHECK(run("analyze " + sub("thue_morse.sub") + " --format yaml").rc == 1);
}

TEST_CASE("substitutions can be given as JSON") {
  const auto j = write_file("tm.json", R"({"0": "01", "1": "10"})");
  const auto a = json_of(run("analyze --substitution " + quote(j.string())));
  const auto b = json_of(run("analyze " + sub("thue_morse.sub")));
  CHECK(a["perron"] == b["perron"]);
  CHECK(a["recognizabilityLength"] == b["recognizabilityLength"]);
  CHECK(a["incidence"] == b["incidence"]);
}

TEST_CASE("language complexity as CSV") {
  const auto r = run("language " + sub("fibonacci.sub") + " --format csv --max-len 20");
  REQUIRE(r.rc == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,complexity");
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(line == std::to_string(n) + "," + std::to_string(n + 1));
  }
  CHECK(n >= 10);
  const auto j = json_of(run("language " + sub("thue_morse.sub") + " --n 3"));
  CHECK(j.dump().find("complexity") != std::string::npos);
}

TEST_CASE("bispecial listing") {
  const auto r = run("bispecial " + sub("fibonacci.sub") + " --format csv --max-len 12");
  REQUIRE(r.rc == 0);
  CHECK(first_line(r.out) == "word,length,m_l,m_r,m_b,i,kind,n,seedWord");
  CHECK(r.out.find("\n010,3,") != std::string::npos);
  CHECK(run("bispecial " + sub("thue_morse.sub")).rc == 0);
}

TEST_CASE("desubstitution") {
  const auto j = json_of(run("desub " + sub("thue_morse.sub") + " --word 0110"));
  CHECK(j["verdict"] == "unique");
  REQUIRE(j["decompositions"].size() == 1);
  CHECK(j["decompositions"][0]["core"] == "01");
  CHECK(run("desub " + sub("thue_morse.sub") + " --word 000").rc == 1);
}

TEST_CASE("accidents along a tail") {
  const auto j = json_of(run("accidents " + sub("thue_morse.sub") + " --tail '1101001(1)' --horizon 20"));
  CHECK(j.contains("deltas"));
  const auto t = run("accidents " + sub("thue_morse.sub") + " --tail '1101001(1)' --horizon 20 --format text");
  CHECK(t.rc == 0);
  // A fixed point lies in the attractor: saturation is inconclusive.
  const auto s = run("accidents " + sub("thue_morse.sub") + " --tail '[0]'");
  CHECK(s.rc == 2);
  CHECK(s.err.find("inconclusive") != std::string::npos);
  CHECK(run("accidents " + sub("thue_morse.sub") + " --tail '(2)'").rc == 1);
}

TEST_CASE("renorm converges on Thue-Morse 1^inf") {
  const auto r = run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 14 --format csv");
  REQUIRE(r.rc == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "m,value,classification");
  std::string last;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 15);
  CHECK(last.rfind("14,", 0) == 0);
  CHECK(last.find(",converges") != std::string::npos);
  const double v = std::stod(last.substr(3, last.find(',', 3) - 3));
  CHECK(std::abs(v - 2 * std::log(4.0 / 3.0)) < 1e-3);

  const auto j = json_of(run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 14"));
  CHECK(j["classification"] == "converges");
  CHECK(j["closedForm"].get<double>() == doctest::Approx(2 * std::log(4.0 / 3.0)));
  const auto zero = json_of(run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 20 --alpha 2"));
  CHECK(zero["classification"] == "to-zero");
}

TEST_CASE("renorm with a potential file") {
  const auto p = write_file("pot.json", R"({"alpha": 1, "g": {"constant": 2}, "h": null, "logForm": false})");
  const auto a = json_of(run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 6 --potential " +
                             quote(p.string())));
  const auto b = json_of(run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 6"));
  for (std::size_t i = 0; i < a["values"].size(); ++i) {
    CHECK(a["values"][i].get<double>() == doctest::Approx(2 * b["values"][i].get<double>()));
  }
  const auto bad = write_file("badpot.json", R"({"alpha": -1})");
  CHECK(run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --potential " + quote(bad.string())).rc == 1);
}

TEST_CASE("freeze certifies Thue-Morse at beta 50") {
  const auto j = json_of(run("freeze " + sub("thue_morse.sub") + " --wJ 111 --N 8 --beta 50 --nmax 20 --lmax 24"));
  CHECK(j["verdict"] == true);
  CHECK(j["status"] == "certified");
  // No certificate at β = 2: inconclusive rather than an error.
  const auto r = run("freeze " + sub("thue_morse.sub") + " --wJ 111 --N 8 --beta 2 --nmax 12 --lmax 12");
  CHECK(r.rc == 2);
  CHECK(json_of(Run{0, r.out, ""})["verdict"] == false);
  CHECK(run("freeze " + sub("thue_morse.sub") + " --wJ 0110 --N 8 --beta 50").rc == 1);
  const auto cap = run("freeze " + sub("thue_morse.sub") + " --wJ 111 --N 8 --beta 50 --nmax 100");
  CHECK(cap.rc == 2);
  CHECK(cap.err.find("inconclusive") != std::string::npos);
}

TEST_CASE("pressure CSV") {
  const auto r = run("pressure " + sub("thue_morse.sub") + " --n 8 --beta 0,1,10");
  REQUIRE(r.rc == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "beta,lower,upper");
  std::getline(in, line);
  CHECK(line.rfind("0,0.69314718056,0.69314718056", 0) == 0);
  std::size_t rows = 1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("budget caps come from the environment") {
  CHECK(run("pressure " + sub("thue_morse.sub") + " --n 8 --beta 1", "MORPHIC_ENUM_CAP=6").rc == 2);
  CHECK(run("language " + sub("thue_morse.sub") + " --max-len 40", "MORPHIC_MAX_LEN_CAP=32").rc == 2);
  CHECK(run("language " + sub("thue_morse.sub") + " --max-len 100").rc == 2);
}

TEST_CASE("config files mirror the flags and the command line wins") {
  const auto cfg = write_file("cfg.json", R"({"substitution": ")" + std::string(MORPHIC_DATA_DIR) +
                                              R"x(/thue_morse.sub", "tail": "(1)", "mmax": 5, "format": "csv"})x");
  const auto a = run("renorm --config " + quote(cfg.string()));
  const auto b = run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 5 --format csv");
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  const auto c = run("renorm --config " + quote(cfg.string()) + " --mmax 3");
  REQUIRE(c.rc == 0);
  CHECK(c.out == run("renorm " + sub("thue_morse.sub") + " --tail '(1)' --mmax 3 --format csv").out);
  const auto broken = write_file("broken.json", "[1, 2]");
  CHECK(run("renorm --config " + quote(broken.string())).rc == 1);
}

TEST_CASE("output is deterministic and can go to a file") {
  for (const std::string& cmd :
       {"analyze " + sub("three_letter.sub"), "bispecial " + sub("thue_morse.sub") + " --format csv",
        "accidents " + sub("three_letter.sub") + " --tail '00(0)'",
        "freeze " + sub("thue_morse.sub") + " --wJ 111 --N 8 --nmax 12 --lmax 12",
        "pressure " + sub("fibonacci.sub") + " --n 10"}) {
    const auto a = run(cmd);
    const auto b = run(cmd);
    CHECK(a.rc == b.rc);
    CHECK(a.out == b.out);
    CHECK(!a.out.empty());
  }
  const auto path = scratch() / "report.json";
  const auto r = run("analyze " + sub("thue_morse.sub") + " --output " + quote(path.string()));
  CHECK(r.rc == 0);
  CHECK(r.out.empty());
  CHECK(Json::parse(slurp(path))["marked"] == true);
}
