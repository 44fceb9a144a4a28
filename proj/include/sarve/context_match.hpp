#pragma once

#include <string>
#include <vector>

#include "sarve/domain.hpp"

namespace sarve {

struct MatchResult {
  PersonId participant;
  SessionId session;
  bool location_ok = false;
  bool time_ok = false;

  bool matched() const { return location_ok && time_ok; }
};

// location_ok: some window names the session's room.
// time_ok: some window in that room contains [start, start + duration].
MatchResult match_context(const ContextProfile& profile, const Session& session);

// Typed relations between entities, used to explain a recommendation.
enum class RelationKind {
  social_network,  // A1: user-user
  comment,         // A2: user-comment-item
  item_content,    // A3: item-content feature
  tag_post,        // A4: user-tag-item
};

const char* label(RelationKind kind);

struct RelationEdge {
  RelationKind kind;
  std::vector<std::string> endpoints;

  bool operator==(const RelationEdge&) const = default;
};

// Edges relating presenter p, participant x and a session:
//   A1 (p, x) when the contact log links them;
//   A4 (p, tag, session) for every tag both p and x rated;
//   A3 (session, tag) for every tag rated by the session's presenter;
//   A2 (presenter, "room@start-end", session) for the session itself.
std::vector<RelationEdge> relation_edges(const Dataset& dataset, const PersonId& p,
                                         const PersonId& x, const Session& session);

std::string format_edge(const RelationEdge& edge);

}  // namespace sarve
