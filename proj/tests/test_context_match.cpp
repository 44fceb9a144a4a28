#include <gtest/gtest.h>

#include <algorithm>

#include "sarve/context_match.hpp"
#include "support/oracles.hpp"

namespace sarve {
namespace {

Session session(int start, int dur, const char* room = "RoomA") {
  return {SessionId("s1"), PersonId("p1"), RoomId(room), start, dur};
}

ContextProfile profile(std::vector<AvailabilityWindow> windows) {
  return {PersonId("x1"), std::move(windows)};
}

TEST(ContextMatch, FullDayInRoom) {
  const auto r = match_context(profile({{RoomId("RoomA"), 0, 720}}), session(100, 25));
  EXPECT_TRUE(r.location_ok);
  EXPECT_TRUE(r.time_ok);
  EXPECT_TRUE(r.matched());
}

TEST(ContextMatch, WrongRoom) {
  const auto r = match_context(profile({{RoomId("RoomB"), 0, 720}}), session(100, 25));
  EXPECT_FALSE(r.location_ok);
  EXPECT_FALSE(r.matched());
}

TEST(ContextMatch, SessionOverrunsWindow) {
  const auto r = match_context(profile({{RoomId("RoomA"), 60, 80}}), session(70, 20));
  EXPECT_TRUE(r.location_ok);
  EXPECT_FALSE(r.time_ok);
  EXPECT_FALSE(r.matched());
}

TEST(ContextMatch, ExactFit) {
  EXPECT_TRUE(match_context(profile({{RoomId("RoomA"), 70, 90}}), session(70, 20)).matched());
}

TEST(ContextMatch, WindowInOtherRoomDoesNotCount) {
  const auto r = match_context(
      profile({{RoomId("RoomA"), 0, 50}, {RoomId("RoomB"), 0, 720}}), session(100, 20));
  EXPECT_TRUE(r.location_ok);
  EXPECT_FALSE(r.time_ok);
}

TEST(ContextMatch, RoomNamesNormalized) {
  EXPECT_TRUE(match_context(profile({{RoomId(" rooma"), 0, 720}}), session(0, 5, "ROOMA ")).matched());
}

TEST(ContextMatch, NoWindows) {
  EXPECT_FALSE(match_context(profile({}), session(0, 5)).matched());
}

TEST(ContextMatch, AgreesWithOracle) {
  Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    const Dataset d = testing::random_dataset(rng, {});
    for (const auto& x : d.ids_with_role(Role::participant))
      for (const auto& s : d.sessions)
        EXPECT_EQ(match_context(d.profile_of(x), s).matched(), testing::fits(d, x, s));
  }
}

TEST(ContextMatch, MonotoneInWindows) {
  // adding windows never turns a match into a mismatch
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<AvailabilityWindow> ws;
    const int dur = static_cast<int>(rng.uniform_int(5, 60));
    const Session s = session(static_cast<int>(rng.uniform_int(0, 600)), dur);
    bool was = false;
    for (int k = 0; k < 4; ++k) {
      const int a = static_cast<int>(rng.uniform_int(0, 700));
      ws.push_back({RoomId(rng.bernoulli(0.5) ? "RoomA" : "RoomB"), a,
                    static_cast<int>(rng.uniform_int(a + 1, 720))});
      const bool now = match_context(profile(ws), s).matched();
      EXPECT_TRUE(now || !was);
      was = now;
    }
  }
}

TEST(RelationEdges, SocialLinkAndSharedTags) {
  Dataset d;
  d.contacts = ContactLog(720);
  d.rooms = {RoomId("RoomA")};
  d.ratings = RatingMatrix({ItemId("k1"), ItemId("k2"), ItemId("k3"), ItemId("k4")});
  for (const char* k : {"k1", "k2", "k3"}) {
    d.ratings.set(PersonId("p1"), ItemId(k), 4);
    d.ratings.set(PersonId("x1"), ItemId(k), 3);
  }
  d.ratings.set(PersonId("x1"), ItemId("k4"), 2);
  d.contacts.set(PersonId("p1"), PersonId("x1"), {30, 2});
  const Session s = session(60, 25);
  const auto edges = relation_edges(d, PersonId("p1"), PersonId("x1"), s);
  auto count = [&](RelationKind k) {
    return std::count_if(edges.begin(), edges.end(), [&](auto& e) { return e.kind == k; });
  };
  EXPECT_EQ(count(RelationKind::social_network), 1);
  EXPECT_EQ(count(RelationKind::tag_post), 3);
  EXPECT_EQ(count(RelationKind::item_content), 3);
  EXPECT_EQ(count(RelationKind::comment), 1);
  EXPECT_EQ(format_edge(edges.front()), "A1(p1,x1)");
}

TEST(RelationEdges, NoContactNoSocialEdge) {
  Dataset d;
  d.contacts = ContactLog(720);
  d.ratings = RatingMatrix({ItemId("k1")});
  d.contacts.set(PersonId("p1"), PersonId("x1"), {0, 0});
  const auto edges = relation_edges(d, PersonId("p1"), PersonId("x1"), session(0, 10));
  EXPECT_TRUE(std::none_of(edges.begin(), edges.end(),
                           [](auto& e) { return e.kind == RelationKind::social_network; }));
}

}  // namespace
}  // namespace sarve
