#include <doctest.h>

#include <filesystem>

#include "tangle/cli.hpp"
#include "test_util.hpp"

using namespace tangle;
using tangle::test::TempDir;

TEST_CASE("cli usage errors exit with one") {
  CHECK(cli_main({}) == 1);
  CHECK(cli_main({"frobnicate"}) == 1);
  CHECK(cli_main({"run", "--no-such-flag"}) == 1);
  CHECK(cli_main({"run", "--algorithm", "hoasp", "--trials", "1",
                  "--episodes", "2"}) == 1);  // heuristic source missing
  CHECK(cli_main({"run", "--puzzle", "ropeladder", "--variant",
                  "nonstationary-disk", "--trials", "1", "--episodes", "2"}) == 1);
  CHECK(cli_main({"show-state", "chain(Post)=[+Bogus];chain(String)=[]"}) == 1);
}

TEST_CASE("cli runtime failures exit with two") {
  CHECK(cli_main({"ttest", "/nonexistent/a.csv", "/nonexistent/b.csv"}) == 2);
}

TEST_CASE("cli help exits cleanly") {
  CHECK(cli_main({"--help"}) == 0);
}

TEST_CASE("solve prints a plan for the simplified puzzle") {
  CHECK(cli_main({"solve", "--puzzle", "fishermans", "--variant", "simplified",
                  "--max-depth", "6"}) == 0);
}

TEST_CASE("show-state canonicalizes and validates") {
  CHECK(cli_main({"show-state",
                  "chain(String)=[+Sphere1,+Post,+Sphere2];chain(Post)=[+Ring]"}) == 0);
}

TEST_CASE("run and ttest cooperate end to end") {
  TempDir tmp;
  const std::string out_a = (tmp.path / "a").string();
  const std::string out_b = (tmp.path / "b").string();
  CHECK(cli_main({"run", "--puzzle", "fishermans", "--variant", "simplified",
                  "--algorithm", "qlearning", "--trials", "2", "--episodes", "10",
                  "--seed", "5", "--out", out_a}) == 0);
  CHECK(cli_main({"run", "--puzzle", "fishermans", "--variant", "simplified",
                  "--algorithm", "oasp", "--trials", "2", "--episodes", "10",
                  "--seed", "5", "--out", out_b}) == 0);
  CHECK(std::filesystem::exists(tmp.path / "a" / "raw.csv"));
  CHECK(std::filesystem::exists(tmp.path / "b" / "aggregate.csv"));

  const std::string tt = (tmp.path / "tt.csv").string();
  CHECK(cli_main({"ttest", out_a + "/raw.csv", out_b + "/raw.csv", "--column",
                  "steps", "--out", tt}) == 0);
  CHECK(std::filesystem::exists(tmp.path / "tt.csv"));
  CHECK(cli_main({"ttest", out_a + "/raw.csv", out_b + "/raw.csv", "--column",
                  "altitude"}) == 1);
}
