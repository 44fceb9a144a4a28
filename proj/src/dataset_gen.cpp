#include "sarve/dataset_gen.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/core.h>

#include "sarve/context_match.hpp"
#include "sarve/random.hpp"

namespace sarve {

void GeneratorSpec::check() const {
  auto range_ok = [](IntRange r) { return r.lo <= r.hi; };
  if (n_presenters < 0 || n_participants < 0)
    throw ConfigError("person counts must be >= 0");
  if (contacts_per_presenter < 0 ||
      (n_presenters > 0 && contacts_per_presenter > n_participants))
    throw ConfigError(fmt::format(
        "contacts_per_presenter must lie in [0, n_participants], got {}",
        contacts_per_presenter));
  if (!range_ok(duration_range) || duration_range.lo < 1)
    throw ConfigError("duration range must be non-empty with lo >= 1");
  if (!range_ok(frequency_range) || frequency_range.lo < 1)
    throw ConfigError("frequency range must be non-empty with lo >= 1");
  if (!range_ok(rating_range) || rating_range.lo < 1 || rating_range.hi > 5)
    throw ConfigError("rating range must be a non-empty part of [1, 5]");
  if (t_total <= 0) throw ConfigError("t_total must be > 0");
  if (duration_range.hi > t_total) throw ConfigError("durations cannot exceed t_total");
  if (rooms.empty()) throw ConfigError("at least one room is required");
  if (talk_minutes.empty() ||
      std::any_of(talk_minutes.begin(), talk_minutes.end(), [](int m) { return m <= 0; }) ||
      question_minutes < 0)
    throw ConfigError("talk lengths must be > 0 and question time >= 0");
  if (n_interest_clusters < 1) throw ConfigError("n_interest_clusters must be >= 1");
  if (n_items < 1) throw ConfigError("n_items must be >= 1");
  for (IntRange r : {participant_tags, presenter_tags})
    if (!range_ok(r) || r.lo < 1 || r.hi > n_items)
      throw ConfigError("tags per person must be a non-empty part of [1, n_items]");
  if (!(within_cluster_contact_bias >= 0.0 && within_cluster_contact_bias <= 1.0))
    throw ConfigError("within_cluster_contact_bias must lie in [0, 1]");
}

namespace {

std::string make_id(char prefix, int index, int count) {
  const int width = std::max(3, static_cast<int>(std::to_string(count).size()));
  return fmt::format("{}{:0{}}", prefix, index + 1, width);
}

std::vector<int> balanced_clusters(int n, int clusters, Rng& rng) {
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i % clusters;
  rng.shuffle(out);
  return out;
}

Dataset generate_impl(const GeneratorSpec& spec, std::map<PersonId, int>* clusters_out) {
  spec.check();
  Rng rng(spec.seed);

  Dataset d;
  d.contacts = ContactLog(spec.t_total);
  for (const auto& r : spec.rooms) d.rooms.emplace_back(r);

  std::vector<PersonId> presenters;
  std::vector<PersonId> participants;
  for (int i = 0; i < spec.n_presenters; ++i) {
    presenters.emplace_back(make_id('p', i, spec.n_presenters));
    d.persons.push_back({presenters.back(), Role::presenter});
  }
  for (int i = 0; i < spec.n_participants; ++i) {
    participants.emplace_back(make_id('u', i, spec.n_participants));
    d.persons.push_back({participants.back(), Role::participant});
  }

  std::vector<ItemId> items;
  const int item_width = std::max(2, static_cast<int>(std::to_string(spec.n_items).size()));
  for (int i = 0; i < spec.n_items; ++i)
    items.emplace_back(fmt::format("kw{:0{}}", i + 1, item_width));
  d.ratings = RatingMatrix(items);

  const int n_clusters = spec.n_interest_clusters;
  const auto presenter_cluster = balanced_clusters(spec.n_presenters, n_clusters, rng);
  const auto participant_cluster = balanced_clusters(spec.n_participants, n_clusters, rng);
  if (clusters_out) {
    for (std::size_t i = 0; i < presenters.size(); ++i)
      (*clusters_out)[presenters[i]] = presenter_cluster[i];
    for (std::size_t i = 0; i < participants.size(); ++i)
      (*clusters_out)[participants[i]] = participant_cluster[i];
  }

  // Each cluster prefers its own rating per tag.
  std::vector<std::vector<int>> preference(static_cast<std::size_t>(n_clusters));
  for (auto& pref : preference)
    for (int i = 0; i < spec.n_items; ++i)
      pref.push_back(static_cast<int>(rng.uniform_int(spec.rating_range.lo, spec.rating_range.hi)));

  auto rate = [&](const PersonId& person, int cluster, IntRange tags) {
    std::vector<int> order(static_cast<std::size_t>(spec.n_items));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const auto n = rng.uniform_int(tags.lo, tags.hi);
    for (long long k = 0; k < n; ++k) {
      const auto item = static_cast<std::size_t>(order[static_cast<std::size_t>(k)]);
      const double u = rng.uniform01();
      const int noise = u < 0.15 ? -1 : (u < 0.30 ? 1 : 0);
      const int value = std::clamp(preference[static_cast<std::size_t>(cluster)][item] + noise,
                                   spec.rating_range.lo, spec.rating_range.hi);
      d.ratings.set(person, items[item], value);
    }
  };
  for (std::size_t i = 0; i < presenters.size(); ++i)
    rate(presenters[i], presenter_cluster[i], spec.presenter_tags);
  for (std::size_t i = 0; i < participants.size(); ++i)
    rate(participants[i], participant_cluster[i], spec.participant_tags);

  // First-fit packing: each session goes to the room that frees up first.
  std::vector<std::size_t> order(presenters.size());
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> room_free(spec.rooms.size(), 0);
  for (std::size_t idx : order) {
    const auto talk = spec.talk_minutes[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<long long>(spec.talk_minutes.size()) - 1))];
    const int duration = talk + spec.question_minutes;
    const auto room = static_cast<std::size_t>(
        std::min_element(room_free.begin(), room_free.end()) - room_free.begin());
    const int start = room_free[room];
    if (start + duration > spec.t_total)
      throw DataError(fmt::format(
          "cannot fit {} sessions into {} rooms within {} minutes", presenters.size(),
          spec.rooms.size(), spec.t_total));
    room_free[room] = start + duration;
    d.sessions.push_back({SessionId(make_id('s', static_cast<int>(idx), spec.n_presenters)),
                          presenters[idx], RoomId(spec.rooms[room]), start, duration});
  }

  // Availability windows of 90 to 360 minutes.
  for (const auto& x : participants) {
    ContextProfile profile{x, {}};
    const auto n_windows = rng.uniform_int(1, 3);
    for (long long w = 0; w < n_windows; ++w) {
      const auto room = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<long long>(spec.rooms.size()) - 1));
      const int latest = std::max(0, (spec.t_total - 90) / 5);
      const int start = 5 * static_cast<int>(rng.uniform_int(0, latest));
      const int length = 5 * static_cast<int>(rng.uniform_int(18, 72));
      const int end = std::min(start + length, spec.t_total);
      if (start < end) profile.windows.push_back({RoomId(spec.rooms[room]), start, end});
    }
    d.availability[x] = std::move(profile);
  }

  // Contacts, biased toward the presenter's own cluster.
  for (std::size_t i = 0; i < presenters.size(); ++i) {
    std::vector<std::size_t> same;
    std::vector<std::size_t> other;
    for (std::size_t j = 0; j < participants.size(); ++j)
      (participant_cluster[j] == presenter_cluster[i] ? same : other).push_back(j);
    for (int c = 0; c < spec.contacts_per_presenter; ++c) {
      const bool pick_same =
          !same.empty() && (other.empty() || rng.bernoulli(spec.within_cluster_contact_bias));
      auto& pool = pick_same ? same : other;
      const auto k = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<long long>(pool.size()) - 1));
      const std::size_t j = pool[k];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
      const int duration =
          static_cast<int>(rng.uniform_int(spec.duration_range.lo, spec.duration_range.hi));
      const int frequency =
          static_cast<int>(rng.uniform_int(spec.frequency_range.lo, spec.frequency_range.hi));
      d.contacts.set(presenters[i], participants[j], {duration, frequency});
    }
  }

  for (std::size_t j = 0; j < participants.size(); ++j) {
    const auto& profile = d.availability.at(participants[j]);
    for (const auto& s : d.sessions) {
      const auto pi = static_cast<std::size_t>(
          std::find(presenters.begin(), presenters.end(), s.presenter) - presenters.begin());
      if (presenter_cluster[pi] != participant_cluster[j]) continue;
      if (match_context(profile, s).matched()) d.relevance.emplace(participants[j], s.id);
    }
  }

  std::sort(d.sessions.begin(), d.sessions.end(),
            [](const Session& a, const Session& b) { return a.id < b.id; });
  return d;
}

}  // namespace

Dataset generate(const GeneratorSpec& spec) { return generate_impl(spec, nullptr); }

std::map<PersonId, int> generated_clusters(const GeneratorSpec& spec) {
  std::map<PersonId, int> clusters;
  generate_impl(spec, &clusters);
  return clusters;
}

DistributionSummary summarize(const Dataset& dataset) {
  DistributionSummary s;
  for (const auto& [_, c] : dataset.contacts.entries()) {
    ++s.durations[c.duration_min];
    ++s.frequencies[c.frequency];
  }
  for (const auto& [_, row] : dataset.ratings.rows())
    for (const auto& cell : row)
      if (cell) ++s.ratings[*cell];
  return s;
}

std::string format_summary(const DistributionSummary& summary) {
  std::string out = "panel\tvalue\tcount\n";
  auto panel = [&](const char* name, const Histogram& h) {
    for (const auto& [value, count] : h) out += fmt::format("{}\t{}\t{}\n", name, value, count);
  };
  panel("contact_duration", summary.durations);
  panel("tag_rating", summary.ratings);
  panel("contact_frequency", summary.frequencies);
  return out;
}

}  // namespace sarve
