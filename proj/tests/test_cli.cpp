#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <doctest.h>

#include "qestkit/json_io.hpp"
#include "qestkit/random.hpp"

using namespace qestkit;
using io::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qestkit_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const fs::path err = work_dir() / "stderr.txt";
  const std::string cmd = std::string(QESTKIT_CLI_PATH) + " " + args + " > " +
                          out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out);
  result.err = slurp(err);
  return result;
}

fs::path write_json(const std::string& name, const json& j) {
  const fs::path path = work_dir() / name;
  io::save_file(path.string(), j);
  return path;
}

const fs::path& x_proj_path() {
  static const fs::path path = [] {
    CMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const CMatrix i2 = CMatrix::Identity(2, 2);
    const Povm povm =
        validate_povm({0.5 * (i2 + x), 0.5 * (i2 - x)});
    return write_json("x-proj.json", io::povm_json(povm));
  }();
  return path;
}

}  // namespace

TEST_CASE("dim accepts inline specs") {
  const RunResult r = run(
      "dim --subalgebra "
      "'{\"blocks\":[{\"ring\":\"R\",\"n\":3,\"m\":1},"
      "{\"ring\":\"R\",\"n\":1,\"m\":1}]}'");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("dim_h") == 7);
}

TEST_CASE("dim accepts builtin names") {
  CHECK(json::parse(run("dim --subalgebra qubit-xz").out).at("dim_h") == 3);
  CHECK(json::parse(run("dim --subalgebra qubit-xz-2copy").out).at("dim_h") ==
        7);
}

TEST_CASE("fisher reproduces the projective example") {
  const RunResult r = run("fisher --model qubit-xz --theta 0,0 --povm " +
                          x_proj_path().string());
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("F")[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(out.at("F")[0][1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.at("F")[1][1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(out.at("J")[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!out.contains("cost"));
}

TEST_CASE("fisher cost path signals singular information with exit 3") {
  const fs::path weight =
      write_json("weight-id.json", io::real_rows(RMatrix::Identity(2, 2)));
  const RunResult r = run("fisher --model qubit-xz --theta 0,0 --weight " +
                          weight.string() + " --povm " +
                          x_proj_path().string());
  CHECK(r.code == 3);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("sld emits operators and the quantum Fisher matrix") {
  const RunResult r = run("sld --model qubit-xz --theta 0,0.5");
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("sld").size() == 2);
  CHECK(out.at("J")[1][1] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("out-of-domain points exit 2 with a named reason") {
  const RunResult r = run("sld --model qubit-xz --theta 1,0");
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
}

TEST_CASE("reduce improve shrinks a 12-outcome file to five") {
  std::mt19937_64 rng(91);
  const fs::path povm =
      write_json("wide.json", io::povm_json(random_real_povm(2, 12, rng)));
  const fs::path out = work_dir() / "reduced.json";
  const RunResult r =
      run("reduce --mode improve --model qubit-xz --theta 0.3,0.4 "
          "--subalgebra qubit-xz --povm " +
          povm.string() + " --output " + out.string());
  CHECK(r.code == 0);
  const json reduced = io::load_file(out.string());
  CHECK(reduced.at("outcomes").get<int>() <= 5);
  CHECK_NOTHROW(io::povm_from(reduced.at("povm")));
}

TEST_CASE("reduce bayes requires a prior") {
  std::mt19937_64 rng(92);
  const fs::path povm =
      write_json("b.json", io::povm_json(random_povm(2, 6, rng)));
  const RunResult r = run(
      "reduce --mode bayes --subalgebra qubit-xz --povm " + povm.string());
  CHECK(r.code == 2);
}

TEST_CASE("bayes-cost reads a prior file") {
  const fs::path prior =
      write_json("prior.json", io::prior_json(qubit_disk_prior(5)));
  const fs::path trivial = write_json(
      "trivial.json",
      io::povm_json(validate_povm({CMatrix::Identity(2, 2)})));
  const RunResult r =
      run("bayes-cost --povm " + trivial.string() + " --prior " +
          prior.string());
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("cost") ==
        doctest::Approx(0.49).epsilon(1e-12));
}

TEST_CASE("optimizer runs are reproducible under a fixed seed") {
  const std::string cmd =
      "optimize-local --model qubit-xz --theta 0,0 --subalgebra qubit-xz "
      "--support 4 --restarts 2 --seed 42";
  const RunResult a = run(cmd);
  CHECK(a.code == 0);
  const double best_a = json::parse(a.out).at("best_cost").get<double>();
  CHECK(best_a == doctest::Approx(4.0).epsilon(1e-3));
  const RunResult b = run(cmd);
  CHECK(json::parse(b.out).at("best_cost").get<double>() == best_a);
}

TEST_CASE("optimize-bayes emits a full report") {
  const fs::path prior =
      write_json("prior3.json", io::prior_json(qubit_disk_prior(3)));
  const RunResult r = run("optimize-bayes --prior " + prior.string() +
                          " --subalgebra qubit-xz --support 3 --restarts 2 "
                          "--seed 1");
  CHECK(r.code == 0);
  const json out = json::parse(r.out);
  CHECK(out.at("mode") == "bayes");
  CHECK(out.at("best_fisher").is_null());
  CHECK(out.at("best_cost").get<double>() < 0.47);
}

TEST_CASE("check-sufficiency reports a tiny residual for matched pairs") {
  const RunResult r = run(
      "check-sufficiency --model qubit-xz --subalgebra qubit-xz --samples "
      "50 --seed 9");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out).at("max_residual").get<double>() <= 1e-9);
}

TEST_CASE("usage problems exit 2, help exits 0") {
  CHECK(run("fisher --model qubit-xz").code == 2);  // missing flags
  CHECK(run("no-such-command").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run("reduce --help").code == 0);
}

TEST_CASE("unreadable and malformed files exit 2") {
  CHECK(run("fisher --model qubit-xz --theta 0,0 --povm /no/such.json")
            .code == 2);
  const fs::path garbage = work_dir() / "garbage.json";
  std::ofstream(garbage) << "{broken";
  CHECK(run("fisher --model qubit-xz --theta 0,0 --povm " + garbage.string())
            .code == 2);
  CHECK(run("fisher --model qubit-xz --theta 0,,1 --povm " +
            x_proj_path().string())
            .code == 2);
}
