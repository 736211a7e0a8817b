#include "geoloc/synthetic.hpp"

#include <algorithm>
#include <array>
#include <string_view>

#include "file_util.hpp"
#include "geoloc/rng.hpp"

namespace geoloc {
namespace {

struct Province {
  std::string_view name;
  std::array<std::string_view, 2> towns;
};

constexpr std::array<Province, 9> kProvinces{{
    {"norland", {"brackwater", "fenmoor"}},
    {"estmark", {"halden", "ostvik"}},
    {"valdora", {"riverton", "calder"}},
    {"kessin", {"dunmore", "yarrow"}},
    {"maribel", {"sollen", "pike harbor"}},
    {"tarvos", {"granite falls", "merrow"}},
    {"oberlin", {"ashby", "corvin"}},
    {"quessa", {"tamsin", "lorne"}},
    {"arcadia", {"port arcadia", "wexley"}},
}};

// The capital province; datelines favor it the way wire copy favors capitals.
constexpr std::size_t kCapital = 8;

constexpr std::array<std::string_view, 10> kActors{
    "workers", "pensioners", "farmers",  "students", "residents",
    "teachers", "drivers",  "miners",   "retirees", "employees"};
constexpr std::array<std::string_view, 8> kVerbs{"protested", "rallied",  "demonstrated", "rioted",
                                                 "went on strike", "clashed with police",
                                                 "petitioned", "blocked roads"};
constexpr std::array<std::string_view, 12> kMonths{"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                                   "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
constexpr std::array<std::string_view, 7> kDays{"Monday", "Tuesday",  "Wednesday", "Thursday",
                                                "Friday", "Saturday", "Sunday"};
constexpr std::array<std::string_view, 3> kAgencies{"AFP", "AP", "Reuters"};
constexpr std::array<std::string_view, 6> kCounts{"500", "200", "Hundreds of", "Thousands of",
                                                  "About 80", "More than 1,000"};
constexpr std::array<std::string_view, 4> kDirections{"northern", "southern", "eastern", "western"};
constexpr std::array<std::string_view, 6> kGrievances{
    "demanding unpaid wages", "over a land dispute", "against a new tax",
    "after a factory closure", "over polluted water", "against forced evictions"};

constexpr std::string_view kStopwords =
    "a\nabout\nafter\nagain\nall\nalso\nan\nand\nany\nare\nas\nbe\nbeen\nbefore\nbut\nby\n"
    "can\ncould\ndid\ndo\ndoes\nfor\nhad\nhas\nhave\nhe\nher\nhis\nhow\nif\nis\nit\nits\n"
    "more\nmost\nno\nnot\non\nor\nother\nover\nown\nsame\nshe\nso\nsome\nsuch\nthan\nthat\n"
    "the\ntheir\nthem\nthen\nthere\nthese\nthey\nthis\nthose\nthrough\ntoo\nunder\nup\n"
    "very\nwas\nwe\nwere\nwhat\nwhen\nwhere\nwhich\nwhile\nwho\nwith\nwould\n";

constexpr std::string_view kActorLexicon =
    "worker\npensioner\nfarmer\nstudent\nresident\nteacher\ndriver\nminer\nretiree\nemployee\n"
    "police\ngovernment\nofficial\nministry\npeople\ncompany\nauthorities\n";
constexpr std::string_view kActionLexicon =
    "protest\nrally\ndemonstrate\nriot\nstrike\nclash\npetition\nblock\ninjure\narrest\n";
constexpr std::string_view kNontopicLexicon =
    "said\nsay\nreport\ncomment\nrespond\ndecline\ntold\nstatement\nspokesman\naccuse\n"
    "correspondent\n";
constexpr std::string_view kSourceLexicon = "afp\nap\nreuters\nstate media\n";
constexpr std::string_view kDirectionalLexicon =
    "north\nnorthern\nsouth\nsouthern\neast\neastern\nwest\nwestern\ncentral\n";
constexpr std::string_view kMonthLexicon =
    "jan\nfeb\nmar\napr\nmay\njun\njul\naug\nsep\noct\nnov\ndec\n";
constexpr std::string_view kDayLexicon =
    "monday\ntuesday\nwednesday\nthursday\nfriday\nsaturday\nsunday\n";
constexpr std::string_view kAdminLexicon = "province\ncity\ntown\nvillage\ncounty\ndistrict\n";

class Writer {
 public:
  explicit Writer(Rng& rng) : rng_(rng) {}

  template <typename T, std::size_t N>
  std::string pick(const std::array<T, N>& items) {
    return std::string(items[static_cast<std::size_t>(rng_.below(N))]);
  }
  bool chance(double p) { return rng_.uniform() < p; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(rng_.below(n)); }

  std::string town(std::size_t province) { return std::string(kProvinces[province].towns[below(2)]); }
  static std::string province(std::size_t p) { return title(kProvinces[p].name); }

  static std::string title(std::string_view s) {
    std::string out(s);
    bool start = true;
    for (char& c : out) {
      if (start && c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
      start = c == ' ';
    }
    return out;
  }

  // Phrasing typical of event locations.
  std::string event_lead(std::size_t p) {
    const std::string actors = pick(kActors);
    const std::string verb = pick(kVerbs);
    switch (below(4)) {
      case 0:
        return pick(kCounts) + " " + actors + " " + verb + " outside government offices in the city of " +
               title(town(p)) + " in " + province(p) + " province on " + pick(kDays) + ".";
      case 1:
        return pick(kCounts) + " " + actors + " " + verb + " in the town of " + title(town(p)) + ", in " +
               pick(kDirections) + " " + province(p) + " province, " + pick(kGrievances) + ".";
      case 2:
        return "Police arrested " + actors + " who " + verb + " in the village of " + title(town(p)) +
               " of " + province(p) + " province " + pick(kGrievances) + ".";
      default:
        return pick(kCounts) + " " + actors + " " + verb + " across " + province(p) + " province " +
               pick(kGrievances) + ".";
    }
  }

  std::string event_follow_up(std::size_t p) {
    switch (below(3)) {
      case 0:
        return "The " + pick(kActors) + " of " + title(town(p)) + " " + pick(kVerbs) +
               " again the next day, and several people were injured.";
      case 1:
        return "Riot police were sent to the city of " + title(town(p)) + " after the " + pick(kActors) +
               " " + pick(kVerbs) + ".";
      default:
        return "In " + province(p) + " province, " + pick(kActors) + " " + pick(kVerbs) +
               " for a second week.";
    }
  }

  // Weaker, mixed phrasing for secondary event locations.
  std::string secondary_event(std::size_t p) {
    switch (below(3)) {
      case 0:
        return "Protests also spread to " + title(town(p)) + ", where " + pick(kActors) + " " + pick(kVerbs) +
               ".";
      case 1:
        return "In " + province(p) + ", " + pick(kCounts) + " " + pick(kActors) +
               " joined the strike, state media reported.";
      default:
        return pick(kActors) + " in " + title(town(p)) + " " + pick(kVerbs) + " as well, witnesses said.";
    }
  }

  // Phrasing typical of reporting, official or background locations.
  std::string non_event(std::size_t p) {
    const std::string place = chance(0.5) ? province(p) : title(town(p));
    switch (below(4)) {
      case 0:
        return place + " officials said the " + pick(kActors) + " had no permit.";
      case 1:
        return "A government spokesman in " + place + " said on " + pick(kDays) +
               " that the situation was under control.";
      case 2:
        return "The company, which is based in " + place + ", declined to comment.";
      default:
        return "The ministry in " + place + " accused the " + pick(kActors) + " of spreading rumours.";
    }
  }

  std::string dateline(std::size_t p) {
    return title(chance(0.5) ? std::string(kProvinces[p].name) : town(p)) + ", " + pick(kMonths) + " " +
           std::to_string(1 + below(28)) + " (" + pick(kAgencies) + ") - ";
  }

 private:
  Rng& rng_;
};

std::string location_rows() {
  std::string out;
  for (const auto& p : kProvinces) {
    out += std::string(p.name) + "\t" + std::string(p.name) + "\tprovince\n";
    for (auto town : p.towns) out += std::string(town) + "\t" + std::string(p.name) + "\tsubprovince\n";
  }
  return out;
}

}  // namespace

LexiconBundle SyntheticCorpus::bundle() const {
  std::vector<CategoryLexicon> categories;
  for (Category category : kAllCategories) {
    std::string stem(category_tag(category));
    std::transform(stem.begin(), stem.end(), stem.begin(), [](char c) {
      return c == '-' ? '_' : static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    });
    const auto it = lexicon_files.find(stem + ".txt");
    if (it != lexicon_files.end()) categories.push_back(parse_category_lexicon(it->second, category));
  }
  return LexiconBundle(parse_location_lexicon(lexicon_files.at("locations.tsv"), "locations.tsv"),
                       std::move(categories), parse_stopwords(lexicon_files.at("stopwords.txt")),
                       StemExceptionList{});
}

void SyntheticCorpus::write_lexicons(const std::filesystem::path& dir) const {
  for (const auto& [name, content] : lexicon_files) detail::write_file(dir / name, content);
}

SyntheticCorpus generate_synthetic(const SyntheticOptions& options) {
  SyntheticCorpus corpus;
  corpus.lexicon_files = {
      {"locations.tsv", location_rows()},
      {"stopwords.txt", std::string(kStopwords)},
      {"actor.txt", std::string(kActorLexicon)},
      {"action_verb.txt", std::string(kActionLexicon)},
      {"nontopic.txt", std::string(kNontopicLexicon)},
      {"source.txt", std::string(kSourceLexicon)},
      {"directional.txt", std::string(kDirectionalLexicon)},
      {"month.txt", std::string(kMonthLexicon)},
      {"day.txt", std::string(kDayLexicon)},
      {"admin.txt", std::string(kAdminLexicon)},
  };

  Rng rng(options.seed);
  Writer w(rng);
  for (std::size_t a = 0; a < options.articles; ++a) {
    std::vector<std::size_t> order(kProvinces.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);

    const bool multi = w.chance(options.multi_location_share);
    const std::size_t n_event = multi ? 2 + w.below(2) : 1;
    std::vector<std::size_t> events(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_event));
    std::vector<std::size_t> others;
    for (std::size_t i = n_event; i < order.size(); ++i) {
      if (order[i] != kCapital) others.push_back(order[i]);
    }
    const bool capital_free =
        std::find(events.begin(), events.end(), kCapital) == events.end();

    Document doc;
    doc.story_id = "syn-" + std::to_string(1000 + a);
    std::vector<std::string> sentences;
    std::map<std::string, int> labels;
    auto label = [&](std::size_t p, int y) { labels[std::string(kProvinces[p].name)] = y; };

    // Dateline location: usually the capital, never an event location.
    std::size_t dateline = capital_free && w.chance(0.6) ? kCapital : others[0];
    const bool has_dateline = w.chance(0.8);

    const std::size_t primary = events[0];
    std::string lead = w.chance(options.noise) ? w.non_event(primary) : w.event_lead(primary);
    if (has_dateline) {
      lead = w.dateline(dateline) + lead;
      label(dateline, 0);
    }
    sentences.push_back(lead);
    label(primary, 1);
    if (w.chance(0.7)) sentences.push_back(w.event_follow_up(primary));

    for (std::size_t i = 1; i < events.size(); ++i) {
      sentences.push_back(w.chance(options.noise) ? w.non_event(events[i]) : w.secondary_event(events[i]));
      label(events[i], 1);
    }

    // One or two non-event locations, skipping the dateline one.
    std::size_t extra = 1 + w.below(2);
    for (std::size_t p : others) {
      if (extra == 0) break;
      if (has_dateline && p == dateline) continue;
      sentences.push_back(w.chance(options.noise) ? w.secondary_event(p) : w.non_event(p));
      label(p, 0);
      --extra;
    }
    if (has_dateline && w.chance(0.3)) {
      sentences.push_back(w.non_event(dateline));
    }

    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i > 0) doc.raw_text += ' ';
      doc.raw_text += sentences[i];
    }
    doc.labels = std::move(labels);
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace geoloc
