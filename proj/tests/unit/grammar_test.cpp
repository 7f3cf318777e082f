#include <gtest/gtest.h>

#include "corpus.hpp"
#include "shadowblade/error.hpp"
#include "shadowblade/grammar.hpp"
#include "shadowblade/graph.hpp"
#include "shadowblade/tools.hpp"

using namespace shadowblade;

TEST(Grammar, AcceptsIpv4) {
    EXPECT_TRUE(is_valid_host("10.10.10.233"));
    EXPECT_TRUE(is_valid_host("0.0.0.0"));
    EXPECT_TRUE(is_valid_host("255.255.255.255"));
}

TEST(Grammar, RejectsMalformedIpv4) {
    EXPECT_FALSE(is_valid_ipv4("256.1.1.1"));
    EXPECT_FALSE(is_valid_ipv4("1.2.3"));
    EXPECT_FALSE(is_valid_ipv4("1.2.3.4.5"));
    EXPECT_FALSE(is_valid_ipv4("01.2.3.4"));
    EXPECT_FALSE(is_valid_host("1.2.3.4.5"));
    EXPECT_FALSE(is_valid_host("999.1.1.1"));
}

TEST(Grammar, AcceptsHostnames) {
    EXPECT_TRUE(is_valid_host("armageddon.htb"));
    EXPECT_TRUE(is_valid_host("localhost"));
    EXPECT_TRUE(is_valid_host("a-b.c-d.example"));
    EXPECT_TRUE(is_valid_host("xn--bcher-kva.example"));
}

TEST(Grammar, RejectsMalformedHostnames) {
    EXPECT_FALSE(is_valid_host(""));
    EXPECT_FALSE(is_valid_host("-lead.htb"));
    EXPECT_FALSE(is_valid_host("trail-.htb"));
    EXPECT_FALSE(is_valid_host("a..b"));
    EXPECT_FALSE(is_valid_host(".htb"));
    EXPECT_FALSE(is_valid_host(std::string(64, 'a') + ".htb"));
    EXPECT_FALSE(is_valid_host("under_score.htb"));
}

TEST(Grammar, RejectsEveryHostileHost) {
    for (auto host : testing_support::kHostileHosts) {
        EXPECT_FALSE(is_valid_host(host)) << host;
    }
}

TEST(Grammar, HostileHostsNeverReachAnInvocation) {
    for (auto host : testing_support::kHostileHosts) {
        try {
            build_nmap_invocation(host, {});
            ADD_FAILURE() << "accepted " << host;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidHost) << host;
        }
        try {
            new_graph("t", host);
            ADD_FAILURE() << "accepted " << host;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidHost) << host;
        }
    }
}

TEST(Grammar, UrlPaths) {
    EXPECT_TRUE(is_valid_url_path("/"));
    EXPECT_TRUE(is_valid_url_path("/index.php"));
    EXPECT_TRUE(is_valid_url_path("/misc/"));
    EXPECT_TRUE(is_valid_url_path("/a%20b/c~d"));
    EXPECT_FALSE(is_valid_url_path(""));
    EXPECT_FALSE(is_valid_url_path("index.php"));
    EXPECT_FALSE(is_valid_url_path("/../etc"));
    EXPECT_FALSE(is_valid_url_path("/./x"));
    EXPECT_FALSE(is_valid_url_path("//x"));
    EXPECT_FALSE(is_valid_url_path("/a b"));
    EXPECT_FALSE(is_valid_url_path("/a%2"));
    EXPECT_FALSE(is_valid_url_path("/a%zz"));
    EXPECT_FALSE(is_valid_url_path("/a;id"));
    EXPECT_FALSE(is_valid_url_path("/a?x=1"));
}
