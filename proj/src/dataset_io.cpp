#include "sarve/dataset_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/core.h>

namespace sarve {
namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

int to_int(const Line& line, std::size_t index) {
  const std::string& tok = line.tokens[index];
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(fmt::format("expected an integer, got '{}'", tok), line.number);
  return v;
}

void expect_arity(const Line& line, std::size_t n, std::string_view section) {
  if (line.tokens.size() != n)
    throw ParseError(fmt::format("[{}] record needs {} fields, got {}", section, n,
                                 line.tokens.size()),
                     line.number);
}

const std::vector<std::string> kSections = {"meta",     "persons",      "items",
                                            "ratings",  "contacts",     "sessions",
                                            "availability", "relevance"};

}  // namespace

Dataset parse_dataset(std::istream& in) {
  std::map<std::string, std::vector<Line>> sections;
  std::string current;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    auto tokens = tokenize(raw);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;
    if (tokens.front().starts_with('[')) {
      const std::string& head = tokens.front();
      if (tokens.size() != 1 || !head.ends_with(']'))
        throw ParseError(fmt::format("malformed section header '{}'", raw), number);
      current = head.substr(1, head.size() - 2);
      if (std::find(kSections.begin(), kSections.end(), current) == kSections.end())
        throw ParseError(fmt::format("unknown section [{}]", current), number);
      if (sections.contains(current))
        throw ParseError(fmt::format("duplicate section [{}]", current), number);
      sections[current];
      continue;
    }
    if (current.empty())
      throw ParseError("record outside of any section", number);
    sections[current].push_back({number, std::move(tokens)});
  }

  Dataset d;
  if (!sections.contains("meta")) throw ParseError("missing [meta] section", number);

  bool have_t_total = false;
  for (const auto& line : sections["meta"]) {
    const std::string& key = line.tokens.front();
    if (key == "schema_version") {
      expect_arity(line, 2, "meta");
      d.schema_version = to_int(line, 1);
    } else if (key == "t_total") {
      expect_arity(line, 2, "meta");
      d.contacts.set_t_total(to_int(line, 1));
      have_t_total = true;
    } else if (key == "rooms") {
      for (std::size_t i = 1; i < line.tokens.size(); ++i)
        d.rooms.emplace_back(line.tokens[i]);
    } else {
      throw ParseError(fmt::format("unknown meta key '{}'", key), line.number);
    }
  }
  if (!have_t_total) throw ParseError("[meta] lacks t_total", number);

  for (const auto& line : sections["persons"]) {
    expect_arity(line, 2, "persons");
    auto role = parse_role(line.tokens[1]);
    if (!role)
      throw ParseError(fmt::format("unknown role '{}'", line.tokens[1]), line.number);
    d.persons.push_back({PersonId(line.tokens[0]), *role});
  }

  std::vector<ItemId> items;
  for (const auto& line : sections["items"]) {
    expect_arity(line, 1, "items");
    items.emplace_back(line.tokens[0]);
  }
  d.ratings = RatingMatrix(items);

  for (const auto& line : sections["ratings"]) {
    expect_arity(line, 3, "ratings");
    PersonId person(line.tokens[0]);
    ItemId item(line.tokens[1]);
    auto col = d.ratings.item_index(item);
    if (!col)
      throw ParseError(fmt::format("rating for undeclared item '{}'", item.str()),
                       line.number);
    if (d.ratings.has_row(person) && d.ratings.row(person)[*col])
      throw ParseError(fmt::format("duplicate rating for ({}, {})", person.str(),
                                   item.str()),
                       line.number);
    d.ratings.set(person, item, to_int(line, 2));
  }

  for (const auto& line : sections["contacts"]) {
    expect_arity(line, 4, "contacts");
    PersonId presenter(line.tokens[0]);
    PersonId participant(line.tokens[1]);
    if (d.contacts.find(presenter, participant))
      throw ParseError(fmt::format("duplicate contact ({}, {})", presenter.str(),
                                   participant.str()),
                       line.number);
    d.contacts.set(presenter, participant, {to_int(line, 2), to_int(line, 3)});
  }

  for (const auto& line : sections["sessions"]) {
    expect_arity(line, 5, "sessions");
    d.sessions.push_back({SessionId(line.tokens[0]), PersonId(line.tokens[1]),
                          RoomId(line.tokens[2]), to_int(line, 3), to_int(line, 4)});
  }

  for (const auto& line : sections["availability"]) {
    expect_arity(line, 4, "availability");
    PersonId person(line.tokens[0]);
    auto& profile = d.availability[person];
    profile.person = person;
    profile.windows.push_back({RoomId(line.tokens[1]), to_int(line, 2), to_int(line, 3)});
  }

  for (const auto& line : sections["relevance"]) {
    expect_arity(line, 2, "relevance");
    d.relevance.emplace(PersonId(line.tokens[0]), SessionId(line.tokens[1]));
  }

  return d;
}

Dataset parse_dataset(const std::string& text) {
  std::istringstream in(text);
  return parse_dataset(in);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open dataset '{}'", path.string()));
  return parse_dataset(in);
}

std::string serialize_dataset(const Dataset& d) {
  std::string out;
  auto line = [&](const std::string& s) {
    out += s;
    out += '\n';
  };

  line("# sarve dataset");
  line("[meta]");
  line(fmt::format("schema_version {}", d.schema_version));
  line(fmt::format("t_total {}", d.t_total()));
  {
    std::vector<std::string> rooms;
    for (const auto& r : d.rooms) rooms.push_back(r.str());
    std::sort(rooms.begin(), rooms.end());
    std::string l = "rooms";
    for (const auto& r : rooms) l += " " + r;
    line(l);
  }

  line("[persons]");
  {
    auto persons = d.persons;
    std::stable_sort(persons.begin(), persons.end(),
                     [](const Person& a, const Person& b) { return a.id < b.id; });
    for (const auto& p : persons)
      line(fmt::format("{} {}", p.id.str(), to_string(p.role)));
  }

  line("[items]");
  auto items = d.ratings.items();
  std::sort(items.begin(), items.end());
  for (const auto& item : items) line(item.str());

  line("[ratings]");
  for (const auto& [person, row] : d.ratings.rows()) {
    for (const auto& item : items) {
      const auto& cell = row[*d.ratings.item_index(item)];
      if (cell) line(fmt::format("{} {} {}", person.str(), item.str(), *cell));
    }
  }

  line("[contacts]");
  for (const auto& [key, c] : d.contacts.entries())
    line(fmt::format("{} {} {} {}", key.first.str(), key.second.str(), c.duration_min,
                     c.frequency));

  line("[sessions]");
  {
    auto sessions = d.sessions;
    std::stable_sort(sessions.begin(), sessions.end(),
                     [](const Session& a, const Session& b) { return a.id < b.id; });
    for (const auto& s : sessions)
      line(fmt::format("{} {} {} {} {}", s.id.str(), s.presenter.str(), s.room.str(),
                       s.start, s.duration_min));
  }

  line("[availability]");
  for (const auto& [person, profile] : d.availability) {
    auto windows = profile.windows;
    std::sort(windows.begin(), windows.end());
    for (const auto& w : windows)
      line(fmt::format("{} {} {} {}", person.str(), w.room.str(), w.start, w.end));
  }

  line("[relevance]");
  for (const auto& [person, session] : d.relevance)
    line(fmt::format("{} {}", person.str(), session.str()));

  return out;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out << serialize_dataset(dataset);
}

}  // namespace sarve
