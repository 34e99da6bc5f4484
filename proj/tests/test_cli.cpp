#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "massart/cli.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result forge(std::vector<std::string> args) {
  args.insert(args.begin(), "massart-forge");
  std::ostringstream out, err;
  const int code = massart::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("massart-cli-test-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> desk_forge(const std::string& kind, const fs::path& out, const std::string& seed = "1") {
  return {"forge", "--kind", kind, "--m", "8", "--s", "3", "--d", "1", "--k", "2", "--ambient", "24",
          "--mode", "desk", "--seed", seed, "-o", out.string()};
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("forge and verify at the documented parameters") {
  const auto dir = scratch();
  const auto path = dir / "strict.json";
  const auto r = forge({"forge", "--kind", "ltf", "--m", "2000", "--s", "7", "--d", "3", "--k", "1", "--ambient",
                        "4000", "--seed", "1", "-o", path.string()});
  CHECK(r.code == 0);
  const auto v = forge({"verify", path.string()});
  CHECK(v.code == 0);
  const Json report = Json::parse(v.out);
  CHECK(report["pass"].get<bool>());
  CHECK(report["format"] == 1);
  CHECK(report["failures"].empty());
}

TEST_CASE("infeasible parameters exit 2 and name the inequality") {
  const auto r = forge({"forge", "--kind", "ltf", "--m", "100", "--s", "7", "--d", "3", "--k", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("s^2*d <= m/10") != std::string::npos);
  const auto small = forge({"forge", "--kind", "ltf", "--m", "2000", "--s", "7", "--d", "3", "--k", "1", "--ambient", "24"});
  CHECK(small.code == 2);
  CHECK(forge({"forge", "--kind", "nonsense"}).code == 2);
  CHECK(forge({}).code == 2);
}

TEST_CASE("forge is byte-reproducible") {
  const auto dir = scratch();
  for (const std::string kind : {"ltf", "relu", "l2"}) {
    const auto a = dir / (kind + "-a.json");
    const auto b = dir / (kind + "-b.json");
    CHECK(forge(desk_forge(kind, a)).code == 0);
    CHECK(forge(desk_forge(kind, b)).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(forge({"verify", a.string()}).code == 0);
    const auto c = dir / (kind + "-c.json");
    CHECK(forge(desk_forge(kind, c, "2")).code == 0);
    CHECK(slurp(a) != slurp(c));
  }
}

TEST_CASE("fault injection is caught by verify") {
  const auto dir = scratch();
  const auto good = dir / "good.json";
  REQUIRE(forge(desk_forge("ltf", good)).code == 0);
  Json j = Json::parse(slurp(good));
  const int z = j["J"][0].get<int>();
  j["dplus"]["weights"][static_cast<std::size_t>(z)] = "1/1000";
  const auto bad = dir / "bad.json";
  spit(bad, j.dump(1));
  const auto v = forge({"verify", bad.string()});
  CHECK(v.code == 1);
  const Json report = Json::parse(v.out);
  CHECK_FALSE(report["pass"].get<bool>());
  bool named = false;
  for (const auto& f : report["failures"]) named = named || f == "1a";
  CHECK(named);

  Json labels = Json::parse(slurp(good));
  labels["labels"]["a"] = "-1/1";
  labels["labels"]["b"] = "1/1";
  spit(bad, labels.dump(1));
  CHECK(forge({"verify", bad.string()}).code == 1);

  const std::string text = slurp(good);
  spit(bad, text.substr(0, text.size() / 2));
  CHECK(forge({"verify", bad.string()}).code == 3);
  CHECK(forge({"verify", (dir / "missing.json").string()}).code == 3);

  Json version = Json::parse(text);
  version["format"] = 2;
  spit(bad, version.dump());
  CHECK(forge({"verify", bad.string()}).code == 3);
}

TEST_CASE("sample emits the requested rows") {
  const auto dir = scratch();
  const auto inst = dir / "inst.json";
  REQUIRE(forge(desk_forge("ltf", inst)).code == 0);
  const auto csv = dir / "s.csv";
  CHECK(forge({"sample", inst.string(), "-n", "1000", "--seed", "7", "-o", csv.string()}).code == 0);
  const std::string rows = slurp(csv);
  CHECK(count_lines(rows) == 1000);
  const auto again = dir / "s2.csv";
  CHECK(forge({"sample", inst.string(), "-n", "1000", "--seed", "7", "-o", again.string()}).code == 0);
  CHECK(rows == slurp(again));
  std::istringstream in(rows);
  std::string line;
  int a_labels = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(line.size() - comma - 1 == 24);
    a_labels += line.substr(0, comma) == "1";
  }
  // p = 768/853 ~ 0.9004
  CHECK(a_labels / 1000.0 == doctest::Approx(0.9004).epsilon(0.04));
  const auto v = forge({"sample", inst.string(), "-n", "3", "--seed", "1", "--veronese"});
  CHECK(v.code == 0);
  CHECK(count_lines(v.out) == 3);
  CHECK(forge({"sample", inst.string(), "-n", "3", "--null"}).code == 0);
}

TEST_CASE("correlate, bound and duel") {
  const auto dir = scratch();
  const auto inst = dir / "inst.json";
  REQUIRE(forge(desk_forge("ltf", inst)).code == 0);
  const auto c = forge({"correlate", "--instance", inst.string(), "--family", "16", "--c", "3/4", "--seed", "2"});
  CHECK(c.code == 0);
  CHECK(c.out.rfind("i,j,overlap,measure,chi,bound,within\n", 0) == 0);
  CHECK(count_lines(c.out) == 1 + 2 * 16 * 15 / 2);
  CHECK(c.out.find(",0\n") == std::string::npos);

  const auto b = forge({"bound", "--instance", inst.string(), "--family", "100"});
  CHECK(b.code == 0);
  const Json bound = Json::parse(b.out);
  CHECK(bound["family_size"] == 100);

  const auto planted = forge({"duel", "--instance", inst.string(), "--algo", "parity", "--tau", "0", "--family", "100",
                              "--c", "3/4", "--seed", "3"});
  CHECK(planted.code == 0);
  CHECK(Json::parse(planted.out)["verdict"] == "planted");
  const auto transcript = dir / "t.jsonl";
  const auto hidden = forge({"duel", "--instance", inst.string(), "--algo", "parity", "--tau", "bound", "--family",
                             "100", "--c", "3/4", "--seed", "3", "--transcript", transcript.string()});
  CHECK(hidden.code == 0);
  CHECK(Json::parse(hidden.out)["verdict"] == "undecided");
  CHECK(count_lines(slurp(transcript)) == 10000);
}

TEST_CASE("installed binary reports exit codes") {
  const char* bin = std::getenv("MASSART_FORGE_BIN");
  if (bin == nullptr) return;
  const auto dir = scratch();
  const auto inst = dir / "bin.json";
  const std::string base = std::string("\"") + bin + "\" ";
  CHECK(std::system((base + "forge --kind relu --m 8 --s 3 --d 1 --k 2 --ambient 24 --mode desk --seed 4 -o \"" +
                     inst.string() + "\"")
                        .c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((base + "verify \"" + inst.string() + "\" > /dev/null").c_str())) == 0);
  CHECK(WEXITSTATUS(std::system((base + "forge --kind ltf --m 100 --s 7 --d 3 2> /dev/null").c_str())) == 2);
  CHECK(WEXITSTATUS(std::system((base + "verify /nonexistent/x.json 2> /dev/null").c_str())) == 3);
  fs::remove_all(dir);
}
