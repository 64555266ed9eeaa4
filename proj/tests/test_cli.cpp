#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "couette_cli_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

Run run_cli(const std::string& args, const std::string& env = "") {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string command =
        env + " \"" COUETTE_CLI_PATH "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(command.c_str());
    Run run;
    run.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    run.out = slurp(out);
    run.err = slurp(err);
    return run;
}

std::string out_dir(const std::string& name) { return (work_dir() / name).string(); }

json read_json(const std::string& dir, const std::string& file) { return json::parse(slurp(fs::path(dir) / file)); }

std::size_t data_rows(const std::string& csv) {
    std::size_t lines = 0;
    for (std::size_t pos = 0; (pos = csv.find("\r\n", pos)) != std::string::npos; pos += 2) ++lines;
    return lines - 1;
}

}  // namespace

TEST_CASE("solve with the zero preset reports zero norms") {
    const std::string dir = out_dir("zero");
    const Run run = run_cli("solve --k 1 --xi 0.5 --reynolds 10 --forcing zero --out " + dir);
    REQUIRE(run.status == 0);
    const json norms = read_json(dir, "solve.json")["payload"]["norms"];
    CHECK(norms["norm_sq"] == 0.0);
    CHECK(norms["dnorm_sq"] == 0.0);
    CHECK(norms["d2norm_sq"] == 0.0);
}

TEST_CASE("solve with the manufactured quartic") {
    const std::string dir = out_dir("mms");
    const Run run = run_cli("solve --k 4 --xi -3 --reynolds 700 --forcing mms-quartic --out " + dir);
    REQUIRE(run.status == 0);
    const json payload = read_json(dir, "solve.json")["payload"];
    CHECK(payload["residual_max"].get<double>() < 1e-9);
    CHECK(payload["exact_error"].get<double>() < 1e-9);
}

TEST_CASE("k = 0 flag for the sine preset at (0, 1, 100)") {
    const std::string dir = out_dir("k0");
    const Run run = run_cli("solve --k 0 --xi 1 --reynolds 100 --forcing sin --format csv,json --profile --out " + dir);
    REQUIRE(run.status == 0);
    CHECK(read_json(dir, "solve.json")["payload"]["k0_bound_holds"] == true);
    CHECK(fs::exists(fs::path(dir) / "solve.csv"));
    CHECK(fs::exists(fs::path(dir) / "solve_profile.csv"));
}

TEST_CASE("delta sweep CSV has one row per R and is reproducible") {
    const std::string a = out_dir("sweep_a");
    const std::string b = out_dir("sweep_b");
    REQUIRE(run_cli("sweep-delta --target delta1 --r-list 1,10,100 --format csv,json,svg --out " + a).status == 0);
    REQUIRE(run_cli("sweep-delta --target delta1 --r-list 1,10,100 --format csv --out " + b, "COUETTE_THREADS=1")
                .status == 0);
    const std::string csv = slurp(fs::path(a) / "sweep_delta1.csv");
    CHECK(data_rows(csv) == 3);
    CHECK(csv.rfind("R,max_k2_norm_sq,max_dnorm_sq,argmax_k,argmax_xi,points,failures", 0) == 0);
    CHECK(csv == slurp(fs::path(b) / "sweep_delta1.csv"));
    CHECK(fs::exists(fs::path(a) / "delta1_k2.svg"));
    CHECK(fs::exists(fs::path(a) / "delta1_dnorm.svg"));
    const json record = read_json(a, "sweep_delta1.json");
    CHECK(record["schema_version"] == "1");
    for (const json& row : record["payload"]) {
        if (row["skipped"].get<bool>()) continue;
        CHECK(row["max_k2_norm_sq"].get<double>() <= 1.05);
        CHECK(row["max_dnorm_sq"].get<double>() <= 1.05);
    }
}

TEST_CASE("delta2 target and resolvent sweep outputs") {
    const std::string d = out_dir("delta2");
    REQUIRE(run_cli("sweep-delta --target delta2 --r-list 10 --format csv --out " + d).status == 0);
    CHECK(data_rows(slurp(fs::path(d) / "sweep_delta2.csv")) == 1);

    const std::string r = out_dir("resolvent");
    REQUIRE(run_cli("sweep-resolvent --r-list 10,20 --nodes 48 --format csv,json,svg --out " + r).status == 0);
    CHECK(data_rows(slurp(fs::path(r) / "sweep_resolvent.csv")) == 2);
    CHECK(fs::exists(fs::path(r) / "resolvent_norm.svg"));
}

TEST_CASE("eigs writes one row per R") {
    const std::string dir = out_dir("eigs");
    const Run run = run_cli("eigs --k 1 --r-list 100,200 --nodes 64 --format csv,json --out " + dir);
    REQUIRE(run.status == 0);
    CHECK(data_rows(slurp(fs::path(dir) / "eigs.csv")) == 2);
    for (const json& row : read_json(dir, "eigs.json")["payload"]) CHECK(row["rightmost_eig"][0].get<double>() < 0.0);
}

TEST_CASE("errors are machine-readable JSON with a nonzero exit") {
    const Run bad_r = run_cli("solve --k 1 --reynolds -5 --out " + out_dir("bad"));
    CHECK(bad_r.status != 0);
    const json err = json::parse(bad_r.err);
    CHECK(err["error"]["type"] == "invalid_argument");
    CHECK(err["error"]["message"].get<std::string>().find("Reynolds") != std::string::npos);

    const Run bad_list = run_cli("sweep-delta --r-list 100,10 --out " + out_dir("bad_list"));
    CHECK(bad_list.status != 0);
    CHECK(json::parse(bad_list.err)["error"]["type"] == "invalid_argument");

    const Run bad_s = run_cli("solve --k 1 --re-s -1 --reynolds 5 --out " + out_dir("bad_s"));
    CHECK(bad_s.status != 0);
    CHECK(json::parse(bad_s.err)["error"]["type"] == "invalid_argument");

    const Run small = run_cli("eigs --k 1 --reynolds 10 --nodes 4 --out " + out_dir("small"));
    CHECK(small.status != 0);
    CHECK(json::parse(small.err)["error"]["type"] == "sizing_error");
}

TEST_CASE("verify with tolerance zero fails and names the suite") {
    const std::string dir = out_dir("verify_fail");
    const Run run = run_cli("verify --suite manufactured-solution --tolerance-scale 0 --format csv,json --out " + dir);
    CHECK(run.status != 0);
    CHECK(run.out.find("FAIL manufactured-solution") != std::string::npos);
    const json record = read_json(dir, "verify.json");
    REQUIRE(record["payload"].size() == 1);
    CHECK(record["payload"][0]["name"] == "manufactured-solution");
    CHECK(record["payload"][0]["passed"] == false);
}

TEST_CASE("single-suite selection runs only that suite") {
    const std::string dir = out_dir("verify_one");
    const Run run = run_cli("verify --suite large-k --suite k0-estimate --out " + dir);
    CHECK(run.status == 0);
    CHECK(run.out.find("PASS large-k") != std::string::npos);
    CHECK(run.out.find("PASS k0-estimate") != std::string::npos);
    CHECK(run.out.find("manufactured-solution") == std::string::npos);
    CHECK(read_json(dir, "verify.json")["payload"].size() == 2);
}
