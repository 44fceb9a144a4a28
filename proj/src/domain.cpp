#include "sarve/domain.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace sarve {

RoomId normalize_room(const RoomId& room) {
  const std::string& raw = room.str();
  auto first = std::find_if_not(raw.begin(), raw.end(),
                                [](unsigned char c) { return std::isspace(c); });
  auto last = std::find_if_not(raw.rbegin(), raw.rend(), [](unsigned char c) {
                return std::isspace(c);
              }).base();
  std::string out;
  if (first < last) {
    out.reserve(static_cast<std::size_t>(last - first));
    std::transform(first, last, std::back_inserter(out),
                   [](unsigned char c) { return char(std::tolower(c)); });
  }
  return RoomId(std::move(out));
}

bool same_room(const RoomId& a, const RoomId& b) {
  return normalize_room(a) == normalize_room(b);
}

const char* to_string(Role role) {
  return role == Role::presenter ? "presenter" : "participant";
}

std::optional<Role> parse_role(std::string_view text) {
  if (text == "presenter") return Role::presenter;
  if (text == "participant") return Role::participant;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

RatingMatrix::RatingMatrix(std::vector<ItemId> items) : items_(std::move(items)) {
  for (std::size_t i = 0; i < items_.size(); ++i) index_.emplace(items_[i], i);
}

void RatingMatrix::set(const PersonId& person, const ItemId& item, int rating) {
  auto it = index_.find(item);
  if (it == index_.end())
    throw LookupError(fmt::format("unknown item '{}'", item.str()));
  auto& row = rows_[person];
  row.resize(items_.size());
  row[it->second] = rating;
}

std::span<const std::optional<int>> RatingMatrix::row(
    const PersonId& person) const {
  auto it = rows_.find(person);
  if (it == rows_.end())
    throw LookupError(fmt::format("no rating row for '{}'", person.str()));
  return it->second;
}

std::optional<std::size_t> RatingMatrix::item_index(const ItemId& item) const {
  auto it = index_.find(item);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<PersonId> RatingMatrix::row_ids() const {
  std::vector<PersonId> ids;
  ids.reserve(rows_.size());
  for (const auto& [id, _] : rows_) ids.push_back(id);
  return ids;
}

std::size_t RatingMatrix::cell_count() const {
  std::size_t n = 0;
  for (const auto& [_, row] : rows_)
    n += static_cast<std::size_t>(
        std::count_if(row.begin(), row.end(), [](auto& c) { return c.has_value(); }));
  return n;
}

double mean_rating(const RatingMatrix& matrix, const PersonId& person) {
  if (!matrix.has_row(person))
    throw UndefinedMeanError(
        fmt::format("'{}' has no ratings; mean is undefined", person.str()));
  long long sum = 0;
  long long count = 0;
  for (const auto& cell : matrix.row(person)) {
    if (!cell) continue;
    sum += *cell;
    ++count;
  }
  if (count == 0)
    throw UndefinedMeanError(
        fmt::format("'{}' has no ratings; mean is undefined", person.str()));
  return static_cast<double>(sum) / static_cast<double>(count);
}

// ---------------------------------------------------------------------------

void ContactLog::set(const PersonId& presenter, const PersonId& participant,
                     Contact c) {
  entries_[{presenter, participant}] = c;
}

const Contact* ContactLog::find(const PersonId& presenter,
                                const PersonId& participant) const {
  auto it = entries_.find({presenter, participant});
  return it == entries_.end() ? nullptr : &it->second;
}

bool ContactLog::linked(const PersonId& presenter,
                        const PersonId& participant) const {
  const Contact* c = find(presenter, participant);
  return c != nullptr && c->frequency >= 1 && c->duration_min > 0;
}

// ---------------------------------------------------------------------------

DegreeThreshold DegreeThreshold::parse(std::string_view text) {
  if (text == "median") return median();
  if (text == "off") return off();
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v < 0)
    throw ConfigError(fmt::format(
        "degree threshold must be 'median', 'off' or an integer >= 0, got '{}'",
        text));
  return fixed(v);
}

std::string DegreeThreshold::to_string() const {
  switch (mode) {
    case Mode::median:
      return "median";
    case Mode::off:
      return "off";
    case Mode::fixed:
      break;
  }
  return std::to_string(value);
}

void Thresholds::check() const {
  if (!std::isfinite(gamma) || gamma < -1.0 || gamma > 1.0)
    throw ConfigError(fmt::format("gamma must lie in [-1, 1], got {}", gamma));
  if (!std::isfinite(beta) || beta < 0.0)
    throw ConfigError(fmt::format("beta must be finite and >= 0, got {}", beta));
  if (deg_cent_threshold.mode == DegreeThreshold::Mode::fixed &&
      deg_cent_threshold.value < 0)
    throw ConfigError("degree threshold must be >= 0");
  if (k_neighbors && *k_neighbors < 1)
    throw ConfigError(fmt::format("k_neighbors must be >= 1, got {}", *k_neighbors));
  if (top_n < 1) throw ConfigError(fmt::format("top_n must be >= 1, got {}", top_n));
  if (min_overlap < 1)
    throw ConfigError(fmt::format("min_overlap must be >= 1, got {}", min_overlap));
}

// ---------------------------------------------------------------------------

const Person* Dataset::find_person(const PersonId& id) const {
  auto it = std::find_if(persons.begin(), persons.end(),
                         [&](const Person& p) { return p.id == id; });
  return it == persons.end() ? nullptr : &*it;
}

const Session* Dataset::find_session(const SessionId& id) const {
  auto it = std::find_if(sessions.begin(), sessions.end(),
                         [&](const Session& s) { return s.id == id; });
  return it == sessions.end() ? nullptr : &*it;
}

std::vector<PersonId> Dataset::ids_with_role(Role role) const {
  std::vector<PersonId> ids;
  for (const auto& p : persons)
    if (p.role == role) ids.push_back(p.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::vector<const Session*> Dataset::sessions_of(const PersonId& presenter) const {
  std::vector<const Session*> out;
  for (const auto& s : sessions)
    if (s.presenter == presenter) out.push_back(&s);
  std::sort(out.begin(), out.end(),
            [](const Session* a, const Session* b) { return a->id < b->id; });
  return out;
}

ContextProfile Dataset::profile_of(const PersonId& person) const {
  auto it = availability.find(person);
  if (it == availability.end()) return ContextProfile{person, {}};
  return it->second;
}

// ---------------------------------------------------------------------------

bool ValidationReport::names(std::string_view invariant) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.invariant == invariant; });
}

ValidationReport validate_dataset(const Dataset& d) {
  ValidationReport report;
  auto flag = [&](std::string invariant, std::string record) {
    report.violations.push_back({std::move(invariant), std::move(record)});
  };

  const int t_total = d.t_total();
  if (d.schema_version != kSchemaVersion)
    flag("schema_version supported",
         fmt::format("meta schema_version {}", d.schema_version));
  if (t_total <= 0) flag("T_total > 0", fmt::format("meta t_total {}", t_total));

  std::set<RoomId> rooms;
  for (const auto& r : d.rooms) {
    RoomId norm = normalize_room(r);
    if (norm.empty()) flag("room id non-empty", "meta rooms");
    if (!rooms.insert(norm).second)
      flag("room id unique", fmt::format("meta room {}", r.str()));
  }

  std::map<PersonId, Role> roles;
  for (const auto& p : d.persons) {
    if (p.id.empty()) flag("person id non-empty", "persons");
    if (!roles.emplace(p.id, p.role).second)
      flag("person id unique", fmt::format("person {}", p.id.str()));
  }
  auto known = [&](const PersonId& id) { return roles.contains(id); };
  auto is_presenter = [&](const PersonId& id) {
    auto it = roles.find(id);
    return it != roles.end() && it->second == Role::presenter;
  };

  std::set<ItemId> items;
  for (const auto& item : d.ratings.items()) {
    if (item.empty()) flag("item id non-empty", "items");
    if (!items.insert(item).second)
      flag("item id unique", fmt::format("item {}", item.str()));
  }

  for (const auto& [person, row] : d.ratings.rows()) {
    if (!known(person))
      flag("person exists", fmt::format("ratings row {}", person.str()));
    bool any = false;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!row[i]) continue;
      any = true;
      if (*row[i] < 1 || *row[i] > 5)
        flag("rating in [1,5]",
             fmt::format("rating {} {} {}", person.str(),
                         d.ratings.items()[i].str(), *row[i]));
    }
    if (!any)
      flag("at least one rating per row", fmt::format("ratings row {}", person.str()));
  }

  for (const auto& [key, c] : d.contacts.entries()) {
    const auto record = fmt::format("contact {} {} {} {}", key.first.str(),
                                    key.second.str(), c.duration_min, c.frequency);
    if (!is_presenter(key.first)) flag("contact presenter has presenter role", record);
    if (!known(key.second)) flag("person exists", record);
    if (key.first == key.second) flag("contact endpoints distinct", record);
    if (c.duration_min < 0) flag("duration >= 0", record);
    if (c.duration_min > t_total) flag("duration <= T_total", record);
    if (c.frequency < 0) flag("frequency >= 0", record);
    if (c.duration_min > 0 && c.frequency < 1)
      flag("frequency >= 1 when duration > 0", record);
  }

  std::set<SessionId> session_ids;
  for (const auto& s : d.sessions) {
    const auto record = fmt::format("session {} {} {} {} {}", s.id.str(),
                                    s.presenter.str(), s.room.str(), s.start,
                                    s.duration_min);
    if (s.id.empty()) flag("session id non-empty", record);
    if (!session_ids.insert(s.id).second) flag("session id unique", record);
    if (!is_presenter(s.presenter)) flag("session presenter has presenter role", record);
    if (!rooms.contains(normalize_room(s.room))) flag("room declared", record);
    if (s.start < 0) flag("start >= 0", record);
    if (s.duration_min <= 0) flag("duration_min > 0", record);
    if (s.end() > t_total) flag("start + duration_min <= T_total", record);
  }

  for (const auto& [person, profile] : d.availability) {
    if (!known(person)) flag("person exists", fmt::format("availability {}", person.str()));
    for (const auto& w : profile.windows) {
      const auto record = fmt::format("availability {} {} {} {}", person.str(),
                                      w.room.str(), w.start, w.end);
      if (w.start >= w.end) flag("window start < end", record);
      if (w.start < 0 || w.end > t_total) flag("window within [0, T_total]", record);
      if (!rooms.contains(normalize_room(w.room))) flag("room declared", record);
    }
  }

  for (const auto& [person, session] : d.relevance) {
    const auto record = fmt::format("relevance {} {}", person.str(), session.str());
    if (!known(person)) flag("person exists", record);
    if (!session_ids.contains(session)) flag("session exists", record);
  }

  return report;
}

}  // namespace sarve
