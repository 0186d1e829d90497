#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = SDAIRP_CLI_PATH;
const std::string kData = SDAIRP_DATA_DIR;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("sdairp_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("solve-carp on gdb19 with binarization") {
  fs::path out = fresh_dir("carp");
  const int rc = run("solve-carp " + kData + "/gdb19.dat --binarize --time-limit 540 --out " +
                     out.string());
  CHECK(rc == 0);
  CHECK(fs::exists(out / "solution.json"));
  CHECK(fs::exists(out / "routes.json"));
  CHECK(fs::exists(out / "manifest.json"));
  CHECK(slurp(out / "solution.json").find("\"status\": \"optimal\"") != std::string::npos);
}

TEST_CASE("missing instance file exits 1") {
  CHECK(run("solve-carp /no/such/file.dat") == 1);
}

TEST_CASE("infeasible instance exits 2") {
  fs::path out = fresh_dir("carp_infeasible");
  fs::path inst = out / "tight.inst";
  {
    std::ofstream f(inst);
    f << "nodes 2 depot 1 K 1 W 3 zeta 0\n";  // coverage needs 2c = 4 > W
    f << "arc 1 2 c 2 e 0 q 1\n";
  }
  CHECK(run("solve-carp " + inst.string() + " --out " + out.string()) == 2);
}

TEST_CASE("oracle flag cross-checks small instances") {
  fs::path out = fresh_dir("carp_oracle");
  const int rc =
      run("solve-carp " + kData + "/monroy.inst --oracle --out " + out.string());
  CHECK(rc == 0);
}

TEST_CASE("solve-airp writes per-period routes and respects the lockout") {
  fs::path out = fresh_dir("airp");
  fs::path inst = out / "pair.inst";
  {
    std::ofstream f(inst);
    f << "nodes 3 depot 1 K 1 W 6.5 zeta 1\n";
    f << "arc 1 2 c 3 e 0.3 q 1\n";
    f << "arc 1 3 c 3 e 0.3 q 1\n";
  }
  fs::path params = out / "params.txt";
  {
    std::ofstream f(params);
    f << "1 2 r 0.4 s0 0.5\n";
    f << "1 3 r 0.4 s0 0.9\n";
  }
  // forced services collide with the recharge lockout
  CHECK(run("solve-airp " + inst.string() + " --horizon 2 --holding 0.1 --params " + params.string() +
            " --out " + out.string()) == 2);

  // with zeta = 0 the plan exists and both period files appear
  fs::path inst2 = out / "pair0.inst";
  {
    std::ofstream f(inst2);
    f << "nodes 3 depot 1 K 1 W 6.5 zeta 0\n";
    f << "arc 1 2 c 3 e 0.3 q 1\n";
    f << "arc 1 3 c 3 e 0.3 q 1\n";
  }
  CHECK(run("solve-airp " + inst2.string() + " --horizon 2 --holding 0.1 --params " + params.string() +
            " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "routes_t1.json"));
  CHECK(fs::exists(out / "routes_t2.json"));
  const std::string r1 = slurp(out / "routes_t1.json");
  CHECK(r1.find("\"walk\"") != std::string::npos);
}

TEST_CASE("policy-eval produces the summary pair and the inventory log") {
  fs::path out = fresh_dir("peval");
  fs::path spec = out / "mini.exp";
  {
    std::ofstream f(spec);
    f << "instance " << kData << "/monroy.inst\n";
    f << "horizon 2\nrealizations 2\nseed-base 5\nrho-default 10\nh-default 0.1\n";
    f << "ou 2 3 mu 0.5 theta 0.1 sigma 0.1 r0 0.5 s0 1\n";
    f << "ou 1 2 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 1 3 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 2 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 1\n";
    f << "ou 2 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 3 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 4 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "policy myopic\npolicy sdairp T 2 P 16 M 5\n";
  }
  CHECK(run("policy-eval " + spec.string() + " --out " + out.string()) == 0);
  CHECK(fs::exists(out / "summary.csv"));
  CHECK(fs::exists(out / "summary.json"));
  CHECK(fs::exists(out / "inventory_log.csv"));
  const std::string csv = slurp(out / "summary.csv");
  CHECK(csv.find("policy,period,X,H,O,total") == 0);
  CHECK(csv.find("myopic,t=1") != std::string::npos);
  CHECK(csv.find("sdairp(T=2,M=5),total") != std::string::npos);
}

TEST_CASE("an empty roster is rejected") {
  fs::path out = fresh_dir("peval_empty");
  fs::path spec = out / "empty.exp";
  {
    std::ofstream f(spec);
    f << "instance " << kData << "/monroy.inst\n";
    f << "horizon 2\nrealizations 1\n";
    f << "ou 2 3 mu 0.5 theta 0.1 sigma 0.1 r0 0.5 s0 1\n";
    f << "ou 1 2 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 1 3 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 2 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 1\n";
    f << "ou 2 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 3 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 4 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
  }
  CHECK(run("policy-eval " + spec.string() + " --out " + out.string()) == 1);
}

TEST_CASE("simulate exports the path matrix") {
  fs::path out = fresh_dir("simulate");
  CHECK(run("simulate " + kData + "/monroy_eval.exp --paths 3 --horizon 2 --seed 9 --out " +
            out.string()) == 0);
  const std::string csv = slurp(out / "paths.csv");
  CHECK(csv.find("path,period,arc,rate") == 0);
}

TEST_CASE("replaying a manifest reproduces outputs byte for byte") {
  fs::path a = fresh_dir("replay_a");
  fs::path b = fresh_dir("replay_b");
  fs::path spec = a / "mini.exp";
  {
    std::ofstream f(spec);
    f << "instance " << kData << "/monroy.inst\n";
    f << "horizon 2\nrealizations 2\nseed-base 11\nrho-default 10\nh-default 0.1\n";
    f << "ou 2 3 mu 0.5 theta 0.1 sigma 0.1 r0 0.5 s0 1\n";
    f << "ou 1 2 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 1 3 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 2 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 1\n";
    f << "ou 2 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 3 4 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "ou 4 5 mu 0.33 theta 0.1 sigma 0 r0 0.33 s0 0.68\n";
    f << "policy myopic\npolicy sdairp T 2 P 16 M 5\n";
  }
  REQUIRE(run("policy-eval " + spec.string() + " --threads 1 --out " + a.string()) == 0);
  REQUIRE(run("replay " + (a / "manifest.json").string() + " --out " + b.string()) == 0);
  for (const char* file : {"summary.csv", "summary.json", "inventory_log.csv"}) {
    CAPTURE(file);
    CHECK(slurp(a / file) == slurp(b / file));
  }
}
