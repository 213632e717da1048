#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kCantilever =
    "material.mu = 1.0\nmaterial.lambda = 1.0\nmaterial.tau1 = 3.0\n"
    "material.tau2 = 1.0\nmaterial.gamma = 1.0\nmaterial.tau_R = 1.0\n"
    "section.kind = rectangle\nsection.params = 1.0 1.0\n"
    "geometry.L = 1.0\ngeometry.eps_r = 0.1\n"
    "solver.p1 = 2\nsolver.p2 = 2\nsolver.p3 = 6\n"
    "loads.end.1 = 1.0 0 0 0\nsweep.eps = 0.3 0.1 0.03\n";

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string tmp = (fs::temp_directory_path() / "timolab_cli_out.txt").string();
    const std::string cmd = std::string(TIMOLAB_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

std::string write_config(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "timolab_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
}

std::string out_dir() {
    const fs::path dir = fs::temp_directory_path() / "timolab_cli_test" / "out";
    return dir.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("material-check: valid, invalid, parse error") {
    const std::string cfg = write_config("ok.cfg", kCantilever);
    RunResult ok = run("material-check --config " + cfg);
    CHECK(ok.code == 0);
    CHECK(ok.out.find("coercivity") != std::string::npos);

    std::string bad_text = kCantilever;
    bad_text.replace(bad_text.find("material.mu = 1.0"), 17, "material.mu = 0.0");
    const std::string bad = write_config("bad.cfg", bad_text);
    RunResult rb = run("material-check --config " + bad);
    CHECK(rb.code == 1);
    CHECK(rb.out.find("mu") != std::string::npos);

    const std::string broken = write_config("broken.cfg", "material.mu 1.0\n");
    CHECK(run("material-check --config " + broken).code == 2);
    CHECK(run("material-check --config /nonexistent.cfg").code == 2);
    CHECK(run("nonsense-command").code == 2);
}

TEST_CASE("material-check prints the isotropic identity residual") {
    const std::string cfg = write_config(
        "iso.cfg",
        "material.isotropic.lambda = 2.0\nmaterial.isotropic.mu = 1.0\n"
        "section.kind = rectangle\nsection.params = 1 1\nloads.end.1 = 1 0 0 0\n");
    RunResult r = run("material-check --config " + cfg);
    CHECK(r.code == 0);
    CHECK(r.out.find("identity residual") != std::string::npos);
}

TEST_CASE("solve1d prints the cantilever tip deflection 1.61") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("solve1d --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    CHECK(r.out.find("1.610000") != std::string::npos);
    CHECK(fs::exists(out_dir() + "/field1d.txt"));
    CHECK(fs::exists(out_dir() + "/profile_1d.csv"));
    std::ifstream in(out_dir() + "/profile_1d.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "x3,u1,u2,u3,psi1,psi2");
}

TEST_CASE("sweep writes report and rates with documented headers, deterministically") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("sweep --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    const std::string report = slurp(out_dir() + "/report.csv");
    CHECK(report.rfind("eps,energy3d,energy1d,gap,h1_dist,s11,s12,s22,penalty,"
                       "recovery_energy,cond_est\n", 0) == 0);
    CHECK(slurp(out_dir() + "/rates.csv").rfind("quantity,rate\n", 0) == 0);
    RunResult r2 = run("sweep --config " + cfg + " --out " + out_dir());
    CHECK(r2.code == 0);
    CHECK(slurp(out_dir() + "/report.csv") == report);
    CHECK(r2.out == r.out);
}

TEST_CASE("sweep honors an eps-grid override and rejects a bad one") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("sweep --config " + cfg + " --out " + out_dir() +
                      " --eps-grid 0.2 0.1");
    CHECK(r.code == 0);
    std::istringstream in(slurp(out_dir() + "/report.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 3);  // header + 2
    CHECK(run("sweep --config " + cfg + " --eps-grid 0.1 0.2").code == 2);
}

TEST_CASE("solve3d writes its per-eps table") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("solve3d --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    CHECK(slurp(out_dir() + "/solve3d.csv")
              .rfind("eps,energy3d,penalty,cond_est,residual_rel\n", 0) == 0);
}

TEST_CASE("recovery-check reports the gap slope and identity residual") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("recovery-check --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    CHECK(r.out.find("gap slope") != std::string::npos);
    CHECK(slurp(out_dir() + "/recovery.csv")
              .rfind("eps,w_eps,w_tau,gap,identity_residual\n", 0) == 0);
    // accepts a serialized field produced by solve1d
    RunResult r2 = run("recovery-check --config " + cfg + " --out " + out_dir() +
                       " --field " + out_dir() + "/field1d.txt");
    CHECK(r2.code == 0);
}

TEST_CASE("recovery-check with tau2 = 0: identity residual at machine precision") {
    std::string text = kCantilever;
    text.replace(text.find("material.tau2 = 1.0"), 19, "material.tau2 = 0.0");
    const std::string cfg = write_config("t0.cfg", text);
    RunResult r = run("recovery-check --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    // eta = 0: recovery equals the base field; only the scaled shear term
    // separates W^eps from W_tau, and the strain identities are exact
    std::istringstream in(slurp(out_dir() + "/recovery.csv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        const std::size_t last = line.rfind(',');
        CHECK(std::abs(std::stod(line.substr(last + 1))) < 1e-12);
    }
}

TEST_CASE("bn-limit writes the shear-rigid table") {
    const std::string cfg = write_config("c.cfg", kCantilever);
    RunResult r = run("bn-limit --config " + cfg + " --out " + out_dir());
    CHECK(r.code == 0);
    CHECK(slurp(out_dir() + "/bn.csv").rfind("eps_r,tip_u1,tip_u2,shear_measure\n", 0) == 0);
}
