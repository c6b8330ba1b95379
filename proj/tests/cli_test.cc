// Copyright 2026 The fuzzybell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

struct Invocation {
    int status;
    std::string out;
};

Invocation run(const std::string &args) {
    const std::string cmd = std::string(FUZZYBELL_CLI) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return {-1, {}};
    std::string out;
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int raw = pclose(pipe);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::vector<std::string> lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

std::string header_value(const std::string &text, const std::string &key) {
    const std::string prefix = "# " + key + ": ";
    for (const std::string &line : lines(text))
        if (line.rfind(prefix, 0) == 0) return line.substr(prefix.size());
    return {};
}

std::string data_only(const std::string &text) {
    std::string out;
    for (const std::string &line : lines(text))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

TEST(Cli, IdenticalConfigGivesIdenticalBytes) {
    const std::string args = "fringe --n 5 --scheme of --k 1 --eta 0.7 --mc --shots 800 --seed 11 --grid 6";
    const Invocation a = run(args);
    const Invocation b = run(args);
    ASSERT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("stderr_pp"), std::string::npos);
}

TEST(Cli, WorkerCountDoesNotChangeData) {
    const std::string args = "fringe --n 4 --eta 0.6 --mc --shots 600 --seed 3 --grid 5";
    const Invocation one = run(args + " --workers 1");
    const Invocation three = run(args + " --workers 3");
    ASSERT_EQ(one.status, 0);
    ASSERT_EQ(three.status, 0);
    EXPECT_EQ(data_only(one.out), data_only(three.out));
}

TEST(Cli, ReproduceLineRegeneratesData) {
    const Invocation first = run("spdc-fringe --gain 0.4 --scheme td --h 1 --eta 0.5 --grid 7");
    ASSERT_EQ(first.status, 0);
    std::string again = header_value(first.out, "reproduce");
    ASSERT_EQ(again.rfind("fuzzybell ", 0), 0u);
    again = again.substr(std::string("fuzzybell ").size());
    const Invocation second = run(again);
    ASSERT_EQ(second.status, 0);
    EXPECT_EQ(data_only(first.out), data_only(second.out));
    EXPECT_EQ(header_value(first.out, "version"), header_value(second.out, "version"));
}

TEST(Cli, JsonCarriesConfigAndRows) {
    const Invocation r = run("fringe --n 1 --grid 4 --format json");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(r.out.find("\"config\""), std::string::npos);
    EXPECT_NE(r.out.find("\"rows\""), std::string::npos);
    EXPECT_NE(r.out.find("\"columns\""), std::string::npos);
}

TEST(Cli, ChshOfTwoQubits) {
    const Invocation r = run("chsh --n 1");
    ASSERT_EQ(r.status, 0);
    EXPECT_NE(data_only(r.out).find("2.82842712"), std::string::npos);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("fringe --n 3 --gain 1").status, 2);
    EXPECT_EQ(run("fringe --n 3 --scheme bogus").status, 2);
    EXPECT_EQ(run("fringe --n 3 --eta 1.5").status, 2);
    EXPECT_EQ(run("chsh --n 500").status, 3);
    EXPECT_EQ(run("chsh --n 2 --scheme td --h 5").status, 4);
    EXPECT_EQ(run("harmonics --n 9 --grid 10").status, 2);
}

}  // namespace
