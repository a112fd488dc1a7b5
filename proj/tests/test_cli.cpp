#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

namespace {

const std::string kCli = SNSQKD_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >cli_stdout.txt 2>cli_stderr.txt";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Small search space so the CLI scans stay quick.
const std::string kFastSpace =
    " --grid 4 --space-mu-min 0.01 --space-mu-max 0.8 --space-eps-min 0.01"
    " --space-eps-max 0.2 --space-lambda-min 0.2 --space-lambda-max 1.0"
    " --space-px-min 0.1 --space-px-max 0.3 ";

}  // namespace

TEST_CASE("cli: sweep writes the contracted CSV header and rows") {
    const int rc = run("sweep --lmin 40 --lmax 60 --lstep 10 --ea 0.1" +
                       kFastSpace + "--out cli_sweep_a.csv");
    CHECK(rc == 0);
    const std::string body = slurp("cli_sweep_a.csv");
    CHECK(body.rfind("L_km,mu,epsilon,lambda,p_x,key_rate,e1ph_upper,EZ,n1_lower\n",
                     0) == 0);
    int lines = 0;
    for (char c : body)
        if (c == '\n') ++lines;
    CHECK(lines == 4);  // header + 3 distances

    // Reruns are byte-identical.
    const int rc2 = run("sweep --lmin 40 --lmax 60 --lstep 10 --ea 0.1" +
                        kFastSpace + "--out cli_sweep_b.csv");
    CHECK(rc2 == 0);
    CHECK(slurp("cli_sweep_b.csv") == body);
}

TEST_CASE("cli: empty sweep emits only the header") {
    const int rc = run("sweep --lmin 100 --lmax 50 --lstep 10" + kFastSpace +
                       "--out cli_sweep_empty.csv");
    CHECK(rc == 0);
    CHECK(slurp("cli_sweep_empty.csv") ==
          "L_km,mu,epsilon,lambda,p_x,key_rate,e1ph_upper,EZ,n1_lower\n");
}

TEST_CASE("cli: unwritable output path fails loudly") {
    const int rc = run("sweep --lmin 40 --lmax 40 --lstep 10" + kFastSpace +
                       "--out /nonexistent_dir_xyz/out.csv");
    CHECK(rc != 0);
}

TEST_CASE("cli: config file reproduces the flag run exactly") {
    {
        std::ofstream cfg("cli_config.ini");
        cfg << "# sweep configuration\n"
            << "lmin = 40\n"
            << "lmax = 60\n"
            << "lstep = 10\n"
            << "ea = 0.1\n"
            << "grid = 4\n"
            << "space-mu-min = 0.01\n"
            << "space-mu-max = 0.8\n"
            << "space-eps-min = 0.01\n"
            << "space-eps-max = 0.2\n"
            << "space-lambda-min = 0.2\n"
            << "space-lambda-max = 1.0\n"
            << "space-px-min = 0.1\n"
            << "space-px-max = 0.3\n";
    }
    const int rc = run("sweep --config cli_config.ini --out cli_sweep_cfg.csv");
    CHECK(rc == 0);
    CHECK(slurp("cli_sweep_cfg.csv") == slurp("cli_sweep_a.csv"));

    // Flags override file values.
    const int rc2 =
        run("sweep --config cli_config.ini --lmax 40 --out cli_sweep_cfg2.csv");
    CHECK(rc2 == 0);
    int lines = 0;
    for (char c : slurp("cli_sweep_cfg2.csv"))
        if (c == '\n') ++lines;
    CHECK(lines == 2);
}

TEST_CASE("cli: optimize reports a key rate") {
    const int rc = run("optimize --L 50 --ea 0.1" + kFastSpace);
    CHECK(rc == 0);
    const std::string out = slurp("cli_stdout.txt");
    CHECK(out.find("key_rate = ") != std::string::npos);
    CHECK(out.find("e1ph_U = ") != std::string::npos);
}

TEST_CASE("cli: simulate is seed-deterministic") {
    const std::string args =
        "simulate --L 40 --windows 300000 --seed 11 --mu 0.4 --epsilon 0.05";
    CHECK(run(args) == 0);
    const std::string first = slurp("cli_stdout.txt");
    CHECK(run(args) == 0);
    CHECK(slurp("cli_stdout.txt") == first);
    CHECK(first.find("true_n1 = ") != std::string::npos);

    CHECK(run("simulate --L 40 --windows 300000 --seed 12 --mu 0.4 --epsilon 0.05") ==
          0);
    CHECK(slurp("cli_stdout.txt") != first);
}

TEST_CASE("cli: verify passes, and seeds only change the samples") {
    const std::string base =
        "verify --L 50 --windows 4000000 --trials 6 --mu 0.2 --epsilon 0.1 "
        "--px 0.25 --lambda 0.5 --ea 0.1 --pd 1e-7";
    CHECK(run(base + " --seed 1") == 0);
    const std::string report = slurp("cli_stdout.txt");
    CHECK(report.find("[PASS] source-equivalence") != std::string::npos);
    CHECK(report.find("[PASS] mc-vs-analytic") != std::string::npos);
    CHECK(report.find("[PASS] bound-soundness") != std::string::npos);
    CHECK(run(base + " --seed 2") == 0);
}

TEST_CASE("cli: corrupted bound is caught by the soundness check") {
    // The n1 extrapolation sits ~5% below the truth at these settings, so
    // a 10% inflation must trip the check.
    const int rc =
        run("verify --L 50 --windows 4000000 --trials 6 --mu 0.2 --epsilon 0.1 "
            "--px 0.25 --lambda 0.5 --ea 0.1 --pd 1e-7 --seed 1 --inject-n1-bias");
    CHECK(rc != 0);
    CHECK(slurp("cli_stdout.txt").find("[FAIL] bound-soundness") !=
          std::string::npos);
}

TEST_CASE("cli: bad arguments exit nonzero") {
    CHECK(run("sweep --lstep -5") != 0);
    CHECK(run("") != 0);  // a subcommand is required
}
