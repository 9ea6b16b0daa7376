#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "doctest.h"

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome run_cli(const std::string& args)
{
    std::string cmd = std::string(CSYNC_CLI_PATH) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
        o.out.append(buf, n);
    }
    int status = pclose(pipe);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

class Workdir {
public:
    Workdir() : dir_(fs::temp_directory_path() / ("csync_cli_" + std::to_string(::getpid())))
    {
        fs::create_directories(dir_);
    }
    ~Workdir() { fs::remove_all(dir_); }

    std::string file(const std::string& name, const std::string& text) const
    {
        fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }

private:
    fs::path dir_;
};

const char* cerny4 =
    "alphabet a b\nstates 4\n"
    "trans 1 a 2\ntrans 2 a 3\ntrans 3 a 4\ntrans 4 a 1\n"
    "trans 1 b 2\ntrans 2 b 2\ntrans 3 b 3\ntrans 4 b 4\n";

const char* one_state = "alphabet a b c\nstates 1\ntrans 1 a 1\ntrans 1 b 1\ntrans 1 c 1\n";

const char* swap2 = "alphabet a b\nstates 2\ntrans 1 a 2\ntrans 2 a 1\ntrans 1 b 2\ntrans 2 b 1\n";

const char* abc_c =
    "alphabet a b c\nstates 2\ninitial 1\nfinal 2\n"
    "trans 1 a 1\ntrans 1 b 1\ntrans 1 c 2\n";

}  // namespace

TEST_CASE("sync subcommand")
{
    Workdir d;
    Outcome one = run_cli("sync " + d.file("one.txt", one_state));
    CHECK(one.code == 0);
    CHECK(one.out == "YES \n");

    Outcome c4 = run_cli("sync " + d.file("c4.txt", cerny4));
    CHECK(c4.code == 0);
    REQUIRE(c4.out.rfind("YES ", 0) == 0);
    std::string word = c4.out.substr(4, c4.out.size() - 5);
    CHECK(word.size() >= 9u);
    CHECK(word.size() <= 27u);

    CHECK(run_cli("sync " + d.file("swap.txt", swap2)).out == "NO\n");
    CHECK(run_cli("sync " + d.path("missing.txt")).code == 2);
}

TEST_CASE("constr-sync and oracle subcommands")
{
    Workdir d;
    std::string c = d.file("c.txt", abc_c);
    std::string one = d.file("one.txt", one_state);
    Outcome plain = run_cli("constr-sync --constraint " + c + " --input " + one);
    CHECK(plain.code == 0);
    CHECK(plain.out == "YES\n");
    CHECK(run_cli("constr-sync --shortest --constraint " + c + " --input " + one).out == "YES c\n");
    CHECK(run_cli("oracle --constraint " + c + " --input " + one).out == "YES c\n");

    std::string empty = d.file("empty.txt", "alphabet a b c\nstates 1\ninitial 1\n");
    CHECK(run_cli("constr-sync --constraint " + empty + " --input " + one).out == "NO\n");

    std::string c4 = d.file("c4.txt", cerny4);
    CHECK(run_cli("constr-sync --constraint " + c + " --input " + c4).code == 2);
    CHECK(run_cli("constr-sync --constraint " + c).code == 2);
}

TEST_CASE("classify subcommand")
{
    Workdir d;
    std::string c = d.file("c.txt", abc_c);
    Outcome text = run_cli("classify --constraint " + c);
    CHECK(text.code == 0);
    CHECK(text.out.find("PSPACE-complete") != std::string::npos);

    Outcome js = run_cli("classify --json --constraint " + c);
    CHECK(js.code == 0);
    auto parsed = nlohmann::json::parse(js.out);
    CHECK(parsed.dump(2) + "\n" == js.out);

    std::string astar = d.file("a.txt", "alphabet a b\nstates 1\ninitial 1\nfinal 1\ntrans 1 a 1\n");
    CHECK(run_cli("classify --constraint " + astar).out.find("verdict: P") != std::string::npos);
}

TEST_CASE("gadget subcommand")
{
    Workdir d;
    std::string base = d.file("base.txt", "alphabet a b\nstates 1\ntrans 1 a 1\ntrans 1 b 1\n");
    std::string out = d.path("out.txt");
    Outcome ideal = run_cli("gadget ideal --input " + base + " --u ab --out " + out);
    CHECK(ideal.code == 0);
    std::ifstream in(out);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str().find("states 3") != std::string::npos);

    std::string two = d.file("two.txt", swap2);
    Outcome loops = run_cli("gadget loops --input " + two);
    CHECK(loops.code == 0);
    CHECK(loops.out.find("states 4") != std::string::npos);

    std::string abc = d.file("abc.txt", one_state);
    Outcome bad = run_cli("gadget uc --input " + abc + " --sigma \"a b c\" --u ac --C b --gamma ab");
    CHECK(bad.code == 2);
    CHECK(run_cli("gadget bogus --input " + abc).code == 2);
}

TEST_CASE("census subcommand and exit codes")
{
    Workdir d;
    std::string out = d.path("records.jsonl");
    Outcome r = run_cli("census --states 2 --alphabet 2 --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("324") != std::string::npos);
    std::ifstream in(out);
    int lines = 0;
    for (std::string line; std::getline(in, line);) {
        auto record = nlohmann::json::parse(line);
        CHECK(record.contains("verdict"));
        ++lines;
    }
    CHECK(lines == 324);
    CHECK(run_cli("census --states 4").code == 3);
    CHECK(run_cli("census --states 2 --alphabet 2").out == r.out);
    CHECK(run_cli("").code == 2);
}
