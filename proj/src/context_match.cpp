#include "sarve/context_match.hpp"

#include <fmt/core.h>

namespace sarve {

MatchResult match_context(const ContextProfile& profile, const Session& session) {
  MatchResult result{profile.person, session.id, false, false};
  const RoomId room = normalize_room(session.room);
  for (const auto& w : profile.windows) {
    if (normalize_room(w.room) != room) continue;
    result.location_ok = true;
    if (w.start <= session.start && session.end() <= w.end) {
      result.time_ok = true;
      break;
    }
  }
  return result;
}

const char* label(RelationKind kind) {
  switch (kind) {
    case RelationKind::social_network:
      return "A1";
    case RelationKind::comment:
      return "A2";
    case RelationKind::item_content:
      return "A3";
    case RelationKind::tag_post:
      return "A4";
  }
  return "?";
}

std::vector<RelationEdge> relation_edges(const Dataset& dataset, const PersonId& p,
                                         const PersonId& x, const Session& session) {
  std::vector<RelationEdge> edges;
  const auto& m = dataset.ratings;

  if (dataset.contacts.linked(p, x))
    edges.push_back({RelationKind::social_network, {p.str(), x.str()}});

  if (m.has_row(p) && m.has_row(x)) {
    auto rp = m.row(p);
    auto rx = m.row(x);
    for (std::size_t i = 0; i < rp.size(); ++i)
      if (rp[i] && rx[i])
        edges.push_back(
            {RelationKind::tag_post, {p.str(), m.items()[i].str(), session.id.str()}});
  }

  if (m.has_row(session.presenter)) {
    auto rs = m.row(session.presenter);
    for (std::size_t i = 0; i < rs.size(); ++i)
      if (rs[i])
        edges.push_back(
            {RelationKind::item_content, {session.id.str(), m.items()[i].str()}});
  }

  edges.push_back({RelationKind::comment,
                   {session.presenter.str(),
                    fmt::format("{}@{}-{}", session.room.str(), session.start,
                                session.end()),
                    session.id.str()}});
  return edges;
}

std::string format_edge(const RelationEdge& edge) {
  std::string out = label(edge.kind);
  out += '(';
  for (std::size_t i = 0; i < edge.endpoints.size(); ++i) {
    if (i) out += ',';
    out += edge.endpoints[i];
  }
  out += ')';
  return out;
}

}  // namespace sarve
