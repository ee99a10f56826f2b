#include "lfkit/error.hpp"
#include "lfkit/reproduce.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace lfkit;

TEST(Reproduce, TargetsPass) {
    for (const auto& t : reproduce_targets()) {
        ReproduceResult r = reproduce(t);
        EXPECT_TRUE(r.ok()) << r.text();
        EXPECT_FALSE(r.checks.empty()) << t;
        EXPECT_NE(r.text().find("all checks passed"), std::string::npos) << t;
    }
}

TEST(Reproduce, Deterministic) {
    for (const char* t : {"eq2-boundary", "cyclic-ex2", "fig7-slice"}) {
        ReproduceResult a = reproduce(t), b = reproduce(t, {4});
        EXPECT_EQ(a.text(), b.text()) << t;
        EXPECT_EQ(a.files, b.files) << t;
    }
}

TEST(Reproduce, UnknownTarget) { EXPECT_THROW(reproduce("nonsense"), ParseError); }

TEST(Reproduce, WritesFiles) {
    auto dir = std::filesystem::temp_directory_path() / "lfkit_reproduce_test";
    std::filesystem::remove_all(dir);
    ReproduceResult r = reproduce("fig7-slice");
    write_reproduction(r, dir.string());
    EXPECT_TRUE(std::filesystem::exists(dir / "fig7-slice.txt"));
    for (const auto& [name, body] : r.files) EXPECT_TRUE(std::filesystem::exists(dir / name)) << name;
    std::filesystem::remove_all(dir);
}
