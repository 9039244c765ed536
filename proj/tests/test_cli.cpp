// End-to-end checks of the command-line tool: file formats, exit codes,
// and byte-identical reruns.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("mixobs_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "stdout.txt";
    const std::string cmd = std::string("'") + MIXOBS_CLI_PATH + "' " + args + " > '" +
                            out_file.string() + "' 2> '" + (dir / "stderr.txt").string() + "'";
    const int status = std::system(cmd.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    return result;
}

fs::path write_model(const fs::path& dir, const std::string& text) {
    const fs::path path = dir / "model.cfg";
    std::ofstream out(path);
    out << text;
    return path;
}

const std::string kExample1Model = "n=2\nk=1\ncommon=normal(0,1)\nanomalous=normal(1,1)\n";

} // namespace

TEST_CASE("cli exponent on the two-variable mean-shift model") {
    const fs::path dir = fresh_dir("exponent");
    const fs::path model = write_model(dir, kExample1Model);
    const CliResult r = run_cli("exponent --design single --vector 1,-1 --config '" +
                                    model.string() + "' --out '" + dir.string() + "'",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("E=0.25 pair=(1,2)") != std::string::npos); // (1-0)^2/(4*1)
    const std::string csv = slurp(dir / "exponent.csv");
    CHECK(csv.find("i,j,exponent_nats,lambda_star") == 0);
    CHECK(csv.find("1,2,0.25,0.5") != std::string::npos);
}

TEST_CASE("cli exponent exits 3 on an indistinguishable design") {
    const fs::path dir = fresh_dir("degenerate");
    const fs::path model = write_model(dir, kExample1Model);
    const CliResult r = run_cli("exponent --design single --vector 1,1 --config '" +
                                    model.string() + "' --out '" + dir.string() + "'",
                                dir);
    CHECK(r.exit_code == 3);
}

TEST_CASE("cli exits 2 on config errors") {
    const fs::path dir = fresh_dir("badconfig");
    const fs::path model = write_model(dir, "n=2\nk=1\ncommon=normal(0,1)\n");
    const CliResult missing_key = run_cli("exponent --design separate --config '" +
                                              model.string() + "' --out '" + dir.string() + "'",
                                          dir);
    CHECK(missing_key.exit_code == 2);
    const CliResult no_config = run_cli("exponent --design separate", dir);
    CHECK(no_config.exit_code == 2);
    const CliResult bad_flag = run_cli("exponent --bogus", dir);
    CHECK(bad_flag.exit_code == 2);
}

TEST_CASE("cli design emits the hamming schedule file bit for bit") {
    const fs::path dir = fresh_dir("hamming");
    const CliResult r = run_cli("design --kind hamming74 --out '" + dir.string() + "'", dir);
    CHECK(r.exit_code == 0);
    CHECK(slurp(dir / "schedule.txt") ==
          "3 7\n1 0 1 0 1 0 1\n0 1 1 0 0 1 1\n0 0 0 1 1 1 1\n");
    // the emitted file feeds straight back into the exponent command
    const fs::path model =
        write_model(dir, "n=7\nk=1\ncommon=normal(0,1)\nanomalous=normal(0,100)\n");
    const CliResult exp = run_cli("exponent --design schedule --schedule-file '" +
                                      (dir / "schedule.txt").string() + "' --config '" +
                                      model.string() + "' --out '" + dir.string() + "'",
                                  dir);
    CHECK(exp.exit_code == 0);
    CHECK(exp.out.find("E=") == 0);
}

TEST_CASE("cli design mean-shift prints the closed-form exponent") {
    const fs::path dir = fresh_dir("meanshift");
    const fs::path model = write_model(dir, kExample1Model);
    const CliResult r = run_cli("design --kind mean-shift --config '" + model.string() +
                                    "' --out '" + dir.string() + "'",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("exponent = 0.25 nats") != std::string::npos); // (1-0)^2/4 at sigma=1
    CHECK(r.out.find("a = (1, -1)") != std::string::npos);
}

TEST_CASE("cli detect consumes schedule and observation files") {
    const fs::path dir = fresh_dir("detect");
    const fs::path model =
        write_model(dir, "n=2\nk=1\ncommon=normal(0,1)\nanomalous=normal(100,1)\n");
    {
        std::ofstream sched(dir / "sched.txt");
        sched << "2 2\n1 0\n0 1\n";
        std::ofstream obs(dir / "obs.txt");
        obs << "99.5\n0.1\n";
    }
    const CliResult r = run_cli("detect --config '" + model.string() + "' --schedule-file '" +
                                    (dir / "sched.txt").string() + "' --observations '" +
                                    (dir / "obs.txt").string() + "'",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "SELECTED 1\n");
    const CliResult np = run_cli("detect --detector np --config '" + model.string() +
                                     "' --schedule-file '" + (dir / "sched.txt").string() +
                                     "' --observations '" + (dir / "obs.txt").string() + "'",
                                 dir);
    CHECK(np.out == "SELECTED 1\n");
}

TEST_CASE("cli simulate writes curve csv and plot script deterministically") {
    const fs::path dir1 = fresh_dir("sim1");
    const fs::path dir2 = fresh_dir("sim2");
    const fs::path model = write_model(
        dir1, "n=6\nk=1\ncommon=normal(0,1)\nanomalous=normal(0,25)\n");
    const std::string args_tail = " --design bipartite --degree 3 --m-values 4,8 --trials 40"
                                  " --detector lrt --seed 12345 --config '" +
                                  model.string() + "'";
    const CliResult r1 = run_cli("simulate" + args_tail + " --out '" + dir1.string() + "'", dir1);
    const CliResult r2 = run_cli("simulate" + args_tail + " --out '" + dir2.string() + "'", dir2);
    CHECK(r1.exit_code == 0);
    CHECK(r2.exit_code == 0);
    const std::string csv1 = slurp(dir1 / "curve.csv");
    CHECK(csv1 == slurp(dir2 / "curve.csv"));
    CHECK(csv1.find("m,design,detector,trials,errors,error_rate,ci_low,ci_high") == 0);
    CHECK(csv1.find("4,bipartite,lrt,40,") != std::string::npos);
    CHECK(slurp(dir1 / "curve.gp") == slurp(dir2 / "curve.gp"));
    // stdout mentions the (differing) output directories; scrub them
    const auto scrub = [](std::string text, const std::string& needle) {
        std::size_t pos;
        while ((pos = text.find(needle)) != std::string::npos) text.erase(pos, needle.size());
        return text;
    };
    CHECK(scrub(r1.out, dir1.string()) == scrub(r2.out, dir2.string()));

    // simulate without a seed must refuse
    const CliResult no_seed = run_cli("simulate --design separate --m-values 4 --config '" +
                                          model.string() + "' --out '" + dir1.string() + "'",
                                      dir1);
    CHECK(no_seed.exit_code == 2);
}

TEST_CASE("cli simulate with workers matches single-threaded output") {
    const fs::path dir1 = fresh_dir("workers1");
    const fs::path dir2 = fresh_dir("workers2");
    const fs::path model = write_model(
        dir1, "n=5\nk=1\ncommon=normal(0,1)\nanomalous=normal(3,1)\n");
    const std::string tail = " --design separate --m-values 5,10 --trials 30 --seed 777"
                             " --config '" + model.string() + "'";
    const CliResult serial = run_cli("simulate" + tail + " --out '" + dir1.string() + "'", dir1);
    const CliResult threaded =
        run_cli("simulate" + tail + " --workers 3 --out '" + dir2.string() + "'", dir2);
    CHECK(serial.exit_code == 0);
    CHECK(threaded.exit_code == 0);
    CHECK(slurp(dir1 / "curve.csv") == slurp(dir2 / "curve.csv"));
}

TEST_CASE("cli exponent and simulate accept permutation ensembles") {
    const fs::path dir = fresh_dir("permutation");
    const fs::path model = write_model(dir, "n=3\nk=1\ncommon=normal(0,1)\nanomalous=normal(2,1)\n");
    const CliResult exp = run_cli("exponent --design permutation --vector 1,-1,0 --config '" +
                                      model.string() + "' --out '" + dir.string() + "'",
                                  dir);
    CHECK(exp.exit_code == 0);
    CHECK(exp.out.find("E=") == 0);
    const CliResult sim = run_cli(
        "simulate --design permutation --vector 1,-1,0 --regime random --m-values 6,12"
        " --trials 30 --seed 9 --config '" +
            model.string() + "' --out '" + dir.string() + "'",
        dir);
    CHECK(sim.exit_code == 0);
    CHECK(slurp(dir / "curve.csv").find("6,permutation,lrt,30,") != std::string::npos);
    const CliResult bad_regime = run_cli(
        "simulate --design permutation --vector 1,-1,0 --regime sometimes --m-values 6"
        " --trials 5 --seed 9 --config '" +
            model.string() + "' --out '" + dir.string() + "'",
        dir);
    CHECK(bad_regime.exit_code == 2);
}

TEST_CASE("cli design separate, permutation, and base-vector kinds") {
    const fs::path dir = fresh_dir("designkinds");
    const fs::path model = write_model(dir, "n=3\nk=1\ncommon=normal(0,1)\nanomalous=normal(2,1)\n");
    const CliResult sep = run_cli("design --kind separate --m 6 --config '" + model.string() +
                                      "' --out '" + dir.string() + "'",
                                  dir);
    CHECK(sep.exit_code == 0);
    CHECK(slurp(dir / "schedule.txt").rfind("6 3\n", 0) == 0);
    const CliResult perm = run_cli("design --kind permutation --vector 2,1,1 --m 6 --config '" +
                                       model.string() + "' --out '" + dir.string() + "'",
                                   dir);
    CHECK(perm.exit_code == 0);
    CHECK(perm.out.find("atoms = 3") != std::string::npos);
    const CliResult base = run_cli("design --kind base-vector --seed 3 --config '" +
                                       model.string() + "' --out '" + dir.string() + "'",
                                   dir);
    CHECK(base.exit_code == 0);
    CHECK(base.out.find("pairwise chernoff sum") != std::string::npos);
    // base-vector refuses unequal variances with a config error
    const fs::path unequal =
        write_model(fresh_dir("designkinds2"), "n=3\nk=1\ncommon=normal(0,1)\nanomalous=normal(0,9)\n");
    const CliResult refused = run_cli("design --kind base-vector --seed 3 --config '" +
                                          unequal.string() + "' --out '" + dir.string() + "'",
                                      dir);
    CHECK(refused.exit_code == 2);
}

TEST_CASE("cli detect reports tournament failure") {
    const fs::path dir = fresh_dir("detectfail");
    const fs::path model = write_model(dir, "n=3\nk=1\ncommon=normal(0,1)\nanomalous=normal(1,1)\n");
    {
        std::ofstream sched(dir / "sched.txt");
        sched << "1 3\n1 1 1\n"; // cannot distinguish k=1 hypotheses
        std::ofstream obs(dir / "obs.txt");
        obs << "0.4\n";
    }
    const CliResult r = run_cli("detect --detector np --config '" + model.string() +
                                    "' --schedule-file '" + (dir / "sched.txt").string() +
                                    "' --observations '" + (dir / "obs.txt").string() + "'",
                                dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "FAILURE\n");
}

TEST_CASE("cli reproduce smoke run") {
    const fs::path dir = fresh_dir("reproduce");
    const CliResult r = run_cli(
        "reproduce fig2 --trials 3 --seed 5 --out '" + dir.string() + "'", dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "fig2.csv");
    CHECK(csv.find("bipartite_d6") != std::string::npos);
    CHECK(csv.find("separate") != std::string::npos);
    CHECK(csv.find("68,bipartite_d6,lrt,3,") != std::string::npos);
    CHECK(fs::exists(dir / "fig2.gp"));
    const CliResult bad = run_cli("reproduce fig9 --seed 5", dir);
    CHECK(bad.exit_code == 2);
}
