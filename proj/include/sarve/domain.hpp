#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sarve {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed dataset text. Carries the 1-based line where parsing failed.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Dataset content that an operation refuses to work with.
class DataError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UndefinedMeanError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Identifiers

template <typename Tag>
class StrongId {
 public:
  StrongId() = default;
  explicit StrongId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const { return value_; }
  bool empty() const { return value_.empty(); }

  auto operator<=>(const StrongId&) const = default;

 private:
  std::string value_;
};

using PersonId = StrongId<struct PersonTag>;
using SessionId = StrongId<struct SessionTag>;
using ItemId = StrongId<struct ItemTag>;
using RoomId = StrongId<struct RoomTag>;

// Rooms compare after trimming and case folding.
RoomId normalize_room(const RoomId& room);
bool same_room(const RoomId& a, const RoomId& b);

enum class Role { participant, presenter };

const char* to_string(Role role);
std::optional<Role> parse_role(std::string_view text);

struct Person {
  PersonId id;
  Role role = Role::participant;
};

// Time is integer minutes from conference start.
struct Session {
  SessionId id;
  PersonId presenter;
  RoomId room;
  int start = 0;
  int duration_min = 0;

  int end() const { return start + duration_min; }
};

struct AvailabilityWindow {
  RoomId room;
  int start = 0;
  int end = 0;

  auto operator<=>(const AvailabilityWindow&) const = default;
};

struct ContextProfile {
  PersonId person;
  std::vector<AvailabilityWindow> windows;
};

// ---------------------------------------------------------------------------
// Rating matrix: persons x tag items, cells absent or an integer rating.
// Rows exist only for persons that were given at least one rating cell.

class RatingMatrix {
 public:
  RatingMatrix() = default;
  explicit RatingMatrix(std::vector<ItemId> items);

  // Throws LookupError when the item is not a declared column.
  void set(const PersonId& person, const ItemId& item, int rating);

  bool has_row(const PersonId& person) const { return rows_.contains(person); }
  // Throws LookupError for a person without a row.
  std::span<const std::optional<int>> row(const PersonId& person) const;

  const std::vector<ItemId>& items() const { return items_; }
  std::optional<std::size_t> item_index(const ItemId& item) const;
  std::vector<PersonId> row_ids() const;
  std::size_t cell_count() const;

  const std::map<PersonId, std::vector<std::optional<int>>>& rows() const {
    return rows_;
  }

 private:
  std::vector<ItemId> items_;
  std::map<ItemId, std::size_t> index_;
  std::map<PersonId, std::vector<std::optional<int>>> rows_;
};

// Arithmetic mean over the person's present ratings only.
// Throws UndefinedMeanError when the person has no ratings.
double mean_rating(const RatingMatrix& matrix, const PersonId& person);

// ---------------------------------------------------------------------------
// Contact log keyed by (presenter, participant).

struct Contact {
  int duration_min = 0;
  int frequency = 0;
};

class ContactLog {
 public:
  using Key = std::pair<PersonId, PersonId>;

  ContactLog() = default;
  explicit ContactLog(int t_total) : t_total_(t_total) {}

  int t_total() const { return t_total_; }
  void set_t_total(int t_total) { t_total_ = t_total; }

  void set(const PersonId& presenter, const PersonId& participant, Contact c);
  const Contact* find(const PersonId& presenter,
                      const PersonId& participant) const;
  // A direct link: frequency >= 1 and duration > 0.
  bool linked(const PersonId& presenter, const PersonId& participant) const;

  const std::map<Key, Contact>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  int t_total_ = 0;
  std::map<Key, Contact> entries_;
};

// ---------------------------------------------------------------------------
// Thresholds

struct DegreeThreshold {
  enum class Mode { median, fixed, off };

  Mode mode = Mode::median;
  int value = 0;

  static DegreeThreshold median() { return {}; }
  static DegreeThreshold fixed(int v) { return {Mode::fixed, v}; }
  static DegreeThreshold off() { return {Mode::off, 0}; }

  // "median", "off" or a non-negative integer.
  static DegreeThreshold parse(std::string_view text);
  std::string to_string() const;
};

struct Thresholds {
  double gamma = 0.6;
  double beta = 0.5;
  DegreeThreshold deg_cent_threshold;
  // Unset means every presenter is eligible for the context stream.
  std::optional<int> k_neighbors;
  int top_n = 10;
  int min_overlap = 2;

  // Throws ConfigError when any field is outside its legal range.
  void check() const;
};

// ---------------------------------------------------------------------------
// Dataset

inline constexpr int kSchemaVersion = 1;

using PersonSessionPair = std::pair<PersonId, SessionId>;
using PairSet = std::set<PersonSessionPair>;

struct Dataset {
  int schema_version = kSchemaVersion;
  std::vector<RoomId> rooms;
  std::vector<Person> persons;
  RatingMatrix ratings;
  ContactLog contacts;
  std::vector<Session> sessions;
  std::map<PersonId, ContextProfile> availability;
  // Ground-truth (participant, session) relevance labels.
  PairSet relevance;

  int t_total() const { return contacts.t_total(); }

  const Person* find_person(const PersonId& id) const;
  const Session* find_session(const SessionId& id) const;
  // Sorted ids of persons with the given role.
  std::vector<PersonId> ids_with_role(Role role) const;
  std::vector<const Session*> sessions_of(const PersonId& presenter) const;
  // Empty profile when the person declared no availability.
  ContextProfile profile_of(const PersonId& person) const;
};

struct Violation {
  std::string invariant;
  std::string record;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool names(std::string_view invariant) const;
};

ValidationReport validate_dataset(const Dataset& dataset);

}  // namespace sarve
