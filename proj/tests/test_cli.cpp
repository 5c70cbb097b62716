#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

// DGLET_BIN is injected by the build as the path of the compiled binary.

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr combined
};

RunResult run(const std::string &args, const std::string &env = "") {
    std::string cmd = env + " \"" + DGLET_BIN + "\" " + args + " 2>&1";
    FILE *pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
        res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path scratch_dir() {
    static fs::path dir = [] {
        auto p = fs::temp_directory_path() /
                 ("dglet_cli_" + std::to_string((long)getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

fs::path write_file(const std::string &name, const std::string &text) {
    auto p = scratch_dir() / name;
    std::ofstream out(p);
    out << text;
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string &s) {
    int n = 0;
    for (char c : s)
        if (c == '\n')
            ++n;
    return n;
}

} // namespace

TEST_CASE("help exits 0 and documents the subcommands") {
    auto res = run("--help");
    CHECK(res.exit_code == 0);
    for (const char *name : {"enumerate", "count", "generate", "evaluate"})
        CHECK(res.output.find(name) != std::string::npos);
}

TEST_CASE("subcommand help documents every flag") {
    auto res = run("count --help");
    CHECK(res.exit_code == 0);
    for (const char *flag : {"--method", "--mode", "--max-n", "--max-k", "--dt", "--t-w",
                             "--w", "--raw-times", "--threads", "--output", "--format"})
        CHECK(res.output.find(flag) != std::string::npos);
    auto eval_help = run("evaluate --help");
    CHECK(eval_help.exit_code == 0);
    for (const char *flag : {"--manifest", "--objects", "--dims", "--baseline",
                             "--baseline-runs", "--no-normalize", "--seed"})
        CHECK(eval_help.output.find(flag) != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
    CHECK(run("").exit_code == 2);                                       // no subcommand
    CHECK(run("enumerate --max-n 3 --max-k 3 --bogus").exit_code == 2);  // unknown flag
    CHECK(run("enumerate --max-k 3").exit_code == 2);                    // missing required
    CHECK(run("count missing.events --method dynamic").exit_code == 2);  // no --dt
    CHECK(run("count x --method sideways --dt 1").exit_code == 2);       // bad enum value
    CHECK(run("generate --class 11").exit_code == 2);                    // bad class
}

TEST_CASE("runtime errors exit 1") {
    auto res = run("count /nonexistent.events --method dynamic --dt 1");
    CHECK(res.exit_code == 1);
    CHECK(res.output.find("error:") != std::string::npos);
    // catalog over the packed-code event limit
    auto cap = run("enumerate --max-n 3 --max-k 17");
    CHECK(cap.exit_code == 1);
    CHECK(cap.output.find("error:") != std::string::npos);
}

TEST_CASE("enumerate dumps catalog and count table") {
    auto res = run("enumerate --max-n 4 --max-k 3");
    REQUIRE(res.exit_code == 0);
    auto blank = res.output.find("\n\n");
    REQUIRE(blank != std::string::npos);
    std::string catalog = res.output.substr(0, blank + 1);
    CHECK(count_lines(catalog) == 10);
    CHECK(catalog.rfind("D_0 2 1 01 0-0 G_0\n", 0) == 0);
    std::string table = res.output.substr(blank + 2);
    CHECK(table.find("3 3 4\n") != std::string::npos);
    CHECK(table.find("4 3 2\n") != std::string::npos);

    auto deep = run("enumerate --max-n 3 --max-k 7");
    REQUIRE(deep.exit_code == 0);
    CHECK(deep.output.find("3 7 364\n") != std::string::npos);

    auto tiny = run("enumerate --max-n 2 --max-k 1");
    REQUIRE(tiny.exit_code == 0);
    CHECK(tiny.output.rfind("D_0 2 1 01 0-0 G_0\n\n", 0) == 0);
}

TEST_CASE("count dynamic on the two-event toy") {
    auto toy = write_file("wedge.events", "a b 0\nb c 1\n");
    auto raw = run("count " + toy.string() + " --method dynamic --max-n 3 --max-k 3 --dt 1 "
                   "--raw-times --threads 1");
    REQUIRE(raw.exit_code == 0);
    CHECK(raw.output == "D_0: 2\nD_2: 1\n");
    // default snapshot pipeline (t_w=2, w=1) puts both events in one window
    auto snap = run("count " + toy.string() + " --method dynamic --max-n 3 --max-k 3 --dt 1 "
                    "--threads 1");
    REQUIRE(snap.exit_code == 0);
    CHECK(snap.output == "D_0: 2\nD_2: 1\n");
}

TEST_CASE("causal mode drops the blocked 2-path") {
    auto toy = write_file("causal.events", "a b 1\nb c 1.5\nb c 2\n");
    std::string base = "count " + toy.string() +
                       " --method dynamic --max-n 3 --max-k 3 --dt 2 --raw-times --threads 1";
    auto regular = run(base);
    REQUIRE(regular.exit_code == 0);
    CHECK(regular.output == "D_0: 3\nD_1: 1\nD_2: 2\nD_6: 1\n");
    auto causal = run(base + " --mode causal");
    REQUIRE(causal.exit_code == 0);
    CHECK(causal.output == "D_0: 3\nD_1: 1\nD_2: 1\nD_6: 1\n");
}

TEST_CASE("count static on a triangle") {
    auto toy = write_file("triangle.events", "a b 0\nb c 1\na c 2\n");
    auto res = run("count " + toy.string() + " --method static --max-n 4");
    REQUIRE(res.exit_code == 0);
    CHECK(res.output == "G_0: 3\nG_2: 1\n");
}

TEST_CASE("count writes csv and json outputs") {
    auto toy = write_file("out.events", "a b 0\nb c 1\n");
    auto prefix = (scratch_dir() / "counts_csv").string();
    auto res = run("count " + toy.string() +
                   " --method dynamic --dt 1 --raw-times --threads 1 --output " + prefix);
    REQUIRE(res.exit_code == 0);
    auto csv = slurp(prefix + ".counts.csv");
    CHECK(csv.rfind("# method=dynamic\n", 0) == 0);
    CHECK(csv.find("0,2\n") != std::string::npos);
    CHECK(slurp(prefix + ".orbits.csv").find("node,orbit_id,count\n") != std::string::npos);

    auto jprefix = (scratch_dir() / "counts_json").string();
    auto jres = run("count " + toy.string() +
                    " --method dynamic --dt 1 --raw-times --threads 1 --format json --output " +
                    jprefix);
    REQUIRE(jres.exit_code == 0);
    auto doc = nlohmann::json::parse(slurp(jprefix + ".counts.json"));
    CHECK(doc["params"]["method"] == "dynamic");
    CHECK(doc["counts"][0] == "2");
    CHECK(doc["counts"][2] == "1");
}

TEST_CASE("generate is byte-reproducible and class-filterable") {
    auto dirA = scratch_dir() / "genA";
    auto dirB = scratch_dir() / "genB";
    auto dirC = scratch_dir() / "genC";
    auto a = run("generate --class linear-evo1 --size 60 --instances 1 --seed 5 --out-dir " +
                 dirA.string());
    REQUIRE(a.exit_code == 0);
    auto b = run("generate --class linear-evo1 --size 60 --instances 1 --seed 5 --out-dir " +
                 dirB.string());
    REQUIRE(b.exit_code == 0);
    auto c = run("generate --class 0 --size 60 --instances 1 --seed 5 --out-dir " +
                 dirC.string());
    REQUIRE(c.exit_code == 0);

    auto events = slurp(dirA / "linear-evo1-s60-i0.events");
    CHECK(!events.empty());
    CHECK(events == slurp(dirB / "linear-evo1-s60-i0.events"));
    CHECK(events == slurp(dirC / "linear-evo1-s60-i0.events")); // index == name
    CHECK(slurp(dirA / "manifest.csv") == slurp(dirB / "manifest.csv"));

    auto other = run("generate --class linear-evo1 --size 60 --instances 1 --seed 6 "
                     "--out-dir " + dirA.string());
    REQUIRE(other.exit_code == 0);
    CHECK(slurp(dirA / "linear-evo1-s60-i0.events") != events);
}

TEST_CASE("generate covers all nine classes by default") {
    auto dir = scratch_dir() / "suite";
    auto res = run("generate --size 40 --instances 1 --seed 1 --out-dir " + dir.string());
    REQUIRE(res.exit_code == 0);
    auto manifest = slurp(dir / "manifest.csv");
    CHECK(count_lines(manifest) == 10); // header + 9 rows
    for (const char *name : {"linear-evo1", "linear-evo2", "linear-pa", "quadratic-evo1",
                             "quadratic-evo2", "quadratic-pa", "exponential-evo1",
                             "exponential-evo2", "exponential-pa"}) {
        std::string file = std::string(name) + "-s40-i0.events";
        CHECK(manifest.find(file) != std::string::npos);
        CHECK(fs::exists(dir / file));
    }
}

TEST_CASE("evaluate produces a parseable report") {
    auto dir = scratch_dir() / "eval_suite";
    REQUIRE(run("generate --size 40 --instances 2 --seed 3 --out-dir " + dir.string())
                .exit_code == 0);
    std::string manifest = (dir / "manifest.csv").string();

    auto res = run("evaluate --manifest " + manifest + " --method static --max-n 3");
    REQUIRE(res.exit_code == 0);
    auto doc = nlohmann::json::parse(res.output);
    double aupr = doc["aupr"].get<double>();
    CHECK(aupr >= 0.0);
    CHECK(aupr <= 1.0);
    CHECK(doc["explained_variance"].size() == 2);
    CHECK(doc["pr_points"].size() == 199);
    CHECK(!doc.contains("baselines"));

    auto base = run("evaluate --manifest " + manifest +
                    " --method static --max-n 3 --baseline --baseline-runs 3 --seed 9");
    REQUIRE(base.exit_code == 0);
    auto bdoc = nlohmann::json::parse(base.output);
    REQUIRE(bdoc.contains("baselines"));
    CHECK(bdoc["baselines"]["schemes"].size() == 2);
    CHECK(bdoc["baselines"]["schemes"][0]["name"] == "random-embedding");

    auto again = run("evaluate --manifest " + manifest +
                     " --method static --max-n 3 --baseline --baseline-runs 3 --seed 9");
    CHECK(again.output == base.output); // seeded: byte-identical
}

TEST_CASE("evaluate dynamic is thread-count independent") {
    auto dir = scratch_dir() / "thread_suite";
    REQUIRE(run("generate --size 30 --instances 2 --seed 8 --out-dir " + dir.string())
                .exit_code == 0);
    std::string manifest = (dir / "manifest.csv").string();
    std::string args = "evaluate --manifest " + manifest +
                       " --method dynamic --max-n 3 --max-k 3 --dt 1";
    auto one = run(args + " --threads 1");
    REQUIRE(one.exit_code == 0);
    auto three = run(args + " --threads 3");
    REQUIRE(three.exit_code == 0);
    CHECK(one.output == three.output);
    auto env = run(args, "DGLET_THREADS=2");
    REQUIRE(env.exit_code == 0);
    CHECK(env.output == one.output);
}

TEST_CASE("evaluate per-node objects defaults to three dimensions") {
    auto dir = scratch_dir() / "node_suite";
    REQUIRE(run("generate --size 30 --instances 1 --seed 4 --out-dir " + dir.string())
                .exit_code == 0);
    auto res = run("evaluate --manifest " + (dir / "manifest.csv").string() +
                   " --method static --max-n 3 --objects nodes");
    REQUIRE(res.exit_code == 0);
    auto doc = nlohmann::json::parse(res.output);
    CHECK(doc["explained_variance"].size() == 3);
    CHECK(doc["aupr"].get<double>() <= 1.0);
    CHECK(doc["pr_points"].size() == 199);
}

TEST_CASE("evaluate scores a perfectly separated toy manifest at 1") {
    auto dir = scratch_dir() / "perfect";
    fs::create_directories(dir);
    const std::string star = "h a 0\nh b 1\nh c 2\nh d 3\n";
    const std::string tri = "a b 0\nb c 1\na c 2\n";
    for (const char *name : {"star1.events", "star2.events"}) {
        std::ofstream out(dir / name);
        out << star;
    }
    for (const char *name : {"tri1.events", "tri2.events"}) {
        std::ofstream out(dir / name);
        out << tri;
    }
    {
        std::ofstream out(dir / "manifest.csv");
        out << "file,class,size,seed\n"
            << "star1.events,0,5,0\n"
            << "star2.events,0,5,0\n"
            << "tri1.events,1,3,0\n"
            << "tri2.events,1,3,0\n";
    }
    auto res = run("evaluate --manifest " + (dir / "manifest.csv").string() +
                   " --method static --max-n 3");
    REQUIRE(res.exit_code == 0);
    auto doc = nlohmann::json::parse(res.output);
    CHECK(doc["aupr"].get<double>() == doctest::Approx(1.0));
    CHECK(doc["auroc"].get<double>() == doctest::Approx(1.0));
}
