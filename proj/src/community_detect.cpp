#include "sarve/community_detect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/core.h>

#include "sarve/context_match.hpp"
#include "sarve/similarity.hpp"
#include "sarve/social_graph.hpp"

namespace sarve {

const char* to_string(Stream stream) {
  return stream == Stream::context ? "context" : "relations";
}

const char* to_string(Gate gate) {
  switch (gate) {
    case Gate::gamma:
      return "gamma";
    case Gate::beta:
      return "beta";
    case Gate::beta_and_popularity:
      return "beta+popularity";
    case Gate::popularity:
      return "popularity";
  }
  return "?";
}

std::vector<Recommendation> RecommendationSet::stream(Stream s) const {
  std::vector<Recommendation> out;
  for (const auto& r : items)
    if (r.stream == s) out.push_back(r);
  return out;
}

PairSet RecommendationSet::pairs(Stream s) const {
  PairSet out;
  for (const auto& r : items)
    if (r.stream == s) out.emplace(r.participant, r.session);
  return out;
}

namespace {

// Scores closer than 1e-12 rank as ties.
long long rank_key(double score) { return std::llround(score * 1e12); }

struct Context {
  const Dataset& dataset;
  const Thresholds& thresholds;
  const SarveOptions& options;
  std::vector<PersonId> presenters;
  std::vector<PersonId> rated_presenters;
  std::map<PersonId, int> degree;
  std::optional<int> degree_threshold;
  std::map<PersonId, std::vector<const Session*>> sessions;
};

struct Partial {
  std::vector<Recommendation> items;
  Diagnostics diagnostics;
};

void rank_and_truncate(std::vector<Recommendation>& recs, Stream stream, int top_n) {
  if (stream == Stream::context) {
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
      if (rank_key(a.score) != rank_key(b.score)) return rank_key(a.score) > rank_key(b.score);
      return a.session < b.session;
    });
  } else {
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
      if (a.popularity_only() != b.popularity_only()) return b.popularity_only();
      if (rank_key(a.score) != rank_key(b.score)) return rank_key(a.score) > rank_key(b.score);
      if (a.presenter_degree != b.presenter_degree)
        return a.presenter_degree > b.presenter_degree;
      return a.session < b.session;
    });
  }
  if (recs.size() > static_cast<std::size_t>(top_n)) recs.resize(top_n);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].rank = static_cast<int>(i) + 1;
}

void recommend_for(const Context& ctx, const PersonId& participant, Partial& out) {
  const Dataset& d = ctx.dataset;
  const Thresholds& th = ctx.thresholds;
  const ContextProfile profile = d.profile_of(participant);
  const bool rated = d.ratings.has_row(participant);

  std::set<PersonId> eligible;
  if (rated && th.k_neighbors) {
    for (const auto& s : k_most_similar(d.ratings, participant, ctx.rated_presenters,
                                        *th.k_neighbors, th.min_overlap))
      eligible.insert(s.presenter);
  }

  auto matched = [&](const Session& s) {
    return !ctx.options.context_filter || match_context(profile, s).matched();
  };

  std::vector<Recommendation> context;
  std::vector<Recommendation> relations;

  for (const auto& presenter : ctx.presenters) {
    if (presenter == participant) continue;
    const auto& own_sessions = ctx.sessions.at(presenter);
    const int degree = ctx.degree.at(presenter);

    // Social context stream.
    if (rated && d.ratings.has_row(presenter)) {
      const auto sim = pearson(d.ratings, presenter, participant, th.min_overlap);
      const bool allowed = !th.k_neighbors || eligible.contains(presenter);
      if (passes_gamma(sim, th.gamma) && allowed) {
        for (const Session* s : own_sessions)
          if (matched(*s))
            context.push_back({participant, s->id, presenter, Stream::context,
                               *sim.value, Gate::gamma, 0, 0});
      } else if (sim.defined() && *sim.value < th.gamma) {
        ++out.diagnostics.weak_context;
      }
    }

    // Social relations stream.
    const auto tie = tie_strength(d.contacts, presenter, participant);
    const bool popular = ctx.degree_threshold &&
                         passes_popularity({presenter, degree}, *ctx.degree_threshold);
    bool tie_ok = passes_beta(tie, th.beta);
    if (ctx.options.relations_gate == RelationsGate::popularity_only) tie_ok = false;
    if (tie_ok || popular) {
      const Gate gate = tie_ok ? (popular ? Gate::beta_and_popularity : Gate::beta)
                               : Gate::popularity;
      for (const Session* s : own_sessions)
        if (matched(*s))
          relations.push_back({participant, s->id, presenter, Stream::relations,
                               tie.value, gate, degree, 0});
    } else if (tie.value > 0.0) {
      ++out.diagnostics.weak_relations;
    }
  }

  rank_and_truncate(context, Stream::context, th.top_n);
  rank_and_truncate(relations, Stream::relations, th.top_n);
  out.items.insert(out.items.end(), context.begin(), context.end());
  out.items.insert(out.items.end(), relations.begin(), relations.end());
}

}  // namespace

RecommendationSet run_sarve(const Dataset& dataset, const Thresholds& thresholds,
                            const SarveOptions& options) {
  const auto report = validate_dataset(dataset);
  if (!report.ok())
    throw DataError(fmt::format("refusing to run on an invalid dataset: {} ({})",
                                report.violations.front().invariant,
                                report.violations.front().record));
  return run_sarve_prevalidated(dataset, thresholds, options);
}

RecommendationSet run_sarve_prevalidated(const Dataset& dataset,
                                         const Thresholds& thresholds,
                                         const SarveOptions& options) {
  thresholds.check();
  if (dataset.t_total() <= 0) throw ConfigError("T_total must be > 0");

  Context ctx{dataset, thresholds, options, dataset.ids_with_role(Role::presenter),
              {}, {}, std::nullopt, {}};
  std::vector<CentralityScore> degrees;
  for (const auto& p : ctx.presenters) {
    degrees.push_back(degree_centrality(dataset.contacts, p));
    ctx.degree[p] = degrees.back().degree;
    ctx.sessions[p] = dataset.sessions_of(p);
    if (dataset.ratings.has_row(p)) ctx.rated_presenters.push_back(p);
  }
  ctx.degree_threshold = resolve_degree_threshold(thresholds.deg_cent_threshold, degrees);

  const auto participants = dataset.ids_with_role(Role::participant);
  const std::size_t workers = std::clamp<std::size_t>(
      options.workers, 1, std::max<std::size_t>(1, participants.size()));
  std::vector<Partial> partials(workers);
  auto run_chunk = [&](std::size_t w) {
    const std::size_t begin = participants.size() * w / workers;
    const std::size_t end = participants.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i)
      recommend_for(ctx, participants[i], partials[w]);
  };
  if (workers == 1) {
    run_chunk(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_chunk, w);
  }

  RecommendationSet out;
  out.thresholds = thresholds;
  out.degree_threshold = ctx.degree_threshold;
  for (auto& part : partials) {
    out.items.insert(out.items.end(), std::make_move_iterator(part.items.begin()),
                     std::make_move_iterator(part.items.end()));
    out.diagnostics.weak_context += part.diagnostics.weak_context;
    out.diagnostics.weak_relations += part.diagnostics.weak_relations;
  }
  return out;
}

std::string serialize_recommendations(const RecommendationSet& recs) {
  const auto& th = recs.thresholds;
  std::string out;
  out += fmt::format(
      "# thresholds gamma={} beta={} deg_cent_threshold={} resolved_degree={} "
      "k_neighbors={} top_n={} min_overlap={}\n",
      th.gamma, th.beta, th.deg_cent_threshold.to_string(),
      recs.degree_threshold ? std::to_string(*recs.degree_threshold) : "off",
      th.k_neighbors ? std::to_string(*th.k_neighbors) : "all", th.top_n,
      th.min_overlap);
  out += fmt::format("# weak_context={} weak_relations={}\n",
                     recs.diagnostics.weak_context, recs.diagnostics.weak_relations);
  out += "participant\tsession\tpresenter\tstream\tscore\trank\tgate\tdegree\n";
  for (const auto& r : recs.items)
    out += fmt::format("{}\t{}\t{}\t{}\t{:.12f}\t{}\t{}\t{}\n", r.participant.str(),
                       r.session.str(), r.presenter.str(), to_string(r.stream), r.score,
                       r.rank, to_string(r.gate),
                       r.stream == Stream::context ? "-"
                                                   : std::to_string(r.presenter_degree));
  return out;
}

double combined_score(const Recommendation& rec) {
  if (rec.stream == Stream::context) return (rec.score + 1.0) / 2.0;
  return std::clamp(rec.score, 0.0, 1.0);
}

ScheduleProposal resolve_conflicts(const RecommendationSet& recs,
                                   std::span<const Session> sessions) {
  std::map<SessionId, const Session*> table;
  for (const auto& s : sessions) table.emplace(s.id, &s);

  // participant -> session -> best evidence
  std::map<PersonId, std::map<SessionId, double>> evidence;
  for (const auto& r : recs.items) {
    auto& slot = evidence[r.participant][r.session];
    slot = std::max(slot, combined_score(r));
  }

  ScheduleProposal proposal;
  for (const auto& [participant, by_session] : evidence) {
    std::vector<ScheduleEntry> candidates;
    for (const auto& [sid, score] : by_session) {
      auto it = table.find(sid);
      if (it == table.end())
        throw LookupError(fmt::format("unknown session '{}'", sid.str()));
      candidates.push_back({sid, score, it->second->start, it->second->end(), {}});
    }
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
      if (a.start != b.start) return a.start < b.start;
      return a.session < b.session;
    });

    ParticipantSchedule sched{participant, {}, {}};
    for (auto& c : candidates) {
      auto clash = std::find_if(sched.kept.begin(), sched.kept.end(), [&](const auto& k) {
        return c.start < k.end && k.start < c.end;
      });
      if (clash == sched.kept.end()) {
        sched.kept.push_back(c);
      } else {
        c.conflict_with = clash->session;
        sched.dropped.push_back(c);
      }
    }
    std::sort(sched.kept.begin(), sched.kept.end(), [](const auto& a, const auto& b) {
      return std::tie(a.start, a.session) < std::tie(b.start, b.session);
    });
    proposal.participants.push_back(std::move(sched));
  }
  return proposal;
}

std::string serialize_schedule(const ScheduleProposal& proposal) {
  std::string out = "participant\tsession\tstatus\tstart\tend\tcombined\tconflict_with\n";
  for (const auto& p : proposal.participants) {
    for (const auto& e : p.kept)
      out += fmt::format("{}\t{}\tkept\t{}\t{}\t{:.12f}\t-\n", p.participant.str(),
                         e.session.str(), e.start, e.end, e.combined_score);
    for (const auto& e : p.dropped)
      out += fmt::format("{}\t{}\tdropped\t{}\t{}\t{:.12f}\t{}\n", p.participant.str(),
                         e.session.str(), e.start, e.end, e.combined_score,
                         e.conflict_with ? e.conflict_with->str() : "-");
  }
  return out;
}

}  // namespace sarve
