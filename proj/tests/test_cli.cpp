// Runs the bitprobe executable end to end and checks output and exit codes.

#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(BITPROBE_CLI) + " " + args + " 2>&1";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bitprobe_cli_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("cli build, query and dump") {
    TempDir tmp;
    const auto empty = tmp.file("empty.bp");
    auto r = run("build --b 2 --set \"\" --out " + empty);
    CHECK(r.code == 0);
    CHECK(r.out.find("total = 98 bits") != std::string::npos);
    CHECK(fs::file_size(empty) == 4 + 1 + 8 + 3 * 8 + 13);

    r = run("query --in " + empty + " --element 0");
    CHECK(r.code == 1);
    CHECK(r.out.rfind("NO\nA[0]=0 ; B[", 0) == 0);

    r = run("query --in " + empty + " --element 64");
    CHECK(r.code == 2);

    const auto zero = tmp.file("zero.bp");
    CHECK(run("build --b 2 --set 0 --out " + zero).code == 0);
    r = run("query --in " + zero + " --element 0");
    CHECK(r.code == 0);
    CHECK(r.out == "YES\nA[0]=0 ; B[6]=1\n");
    r = run("query --in " + zero + " --element 10 --fmt tuple");
    CHECK(r.code == 1);
    CHECK(r.out.rfind("NO 10 (1,1,1,0)\nA[5]=1 ; C[10]=0\n", 0) == 0);
    CHECK(r.out.find("C[") != std::string::npos);

    r = run("dump --in " + zero);
    CHECK(r.code == 0);
    CHECK(r.out.find("B set bits (1): 6\n") != std::string::npos);
    CHECK(r.out.find("C set bits (0):\n") != std::string::npos);

    // Truncated file.
    {
        std::ifstream in(zero, std::ios::binary);
        std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(tmp.file("cut.bp"), std::ios::binary);
        out << bytes.substr(0, bytes.size() - 3);
    }
    r = run("dump --in " + tmp.file("cut.bp"));
    CHECK(r.code == 2);
    CHECK(r.out.find("truncated") != std::string::npos);
}

TEST_CASE("cli input errors exit with 2") {
    TempDir tmp;
    const auto out = tmp.file("x.bp");
    CHECK(run("build --b 2 --set 0,1,2,3,4 --out " + out).code == 2);
    CHECK(run("build --b 2 --set 0,1,1,1,2 --out " + out).code == 0);
    CHECK(run("build --b 2 --set 64 --out " + out).code == 2);
    CHECK(run("build --b 2 --set x --out " + out).code == 2);
    CHECK(run("build --b 1 --out " + out).code == 2);
    CHECK(run("build --out " + out).code == 2);
    CHECK(run("query --in " + tmp.file("missing.bp") + " --element 0").code == 2);
    CHECK(run("frobnicate").code == 2);
    CHECK(run("stats --b-range 4..2").code == 2);
}

TEST_CASE("cli --m pads the universe") {
    TempDir tmp;
    const auto r = run("build --m 100 --set 99 --out " + tmp.file("m.bp"));
    CHECK(r.code == 0);
    CHECK(r.out.find("padded universe size 729") != std::string::npos);
}

TEST_CASE("cli verify and stats") {
    auto r = run("verify --b 2 --exhaustive --max-n 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS") != std::string::npos);

    r = run("verify --b 3 --trials 200 --seed 1 --csv");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("b,subsets,queries,failures,seconds\n3,200,145800,0,", 0) == 0);

    r = run("verify --b 9 --exhaustive");
    CHECK(r.code == 2);
    CHECK(r.out.find("refused") != std::string::npos);

    CHECK(run("verify --b 2").code == 2);

    r = run("stats --b-range 2..4 --csv");
    CHECK(r.code == 0);
    CHECK(r.out == "b,a_bits,b_bits,c_bits,total,ratio\n"
                   "2,32,34,32,98,3.0625\n"
                   "3,243,225,243,711,2.9259\n"
                   "4,1024,856,1024,2904,2.8359\n");
}
