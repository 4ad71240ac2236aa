#include <doctest.h>

#include "fixtures.hpp"
#include "search_oracle.hpp"
#include "temp_dir.hpp"
#include "wotforge/store/crypto.hpp"
#include "wotforge/store/registry_store.hpp"
#include "wotforge/store/tokenizer.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <thread>

using namespace wotforge;
using namespace wotforge::store;
using wotforge::testing::TempDir;

namespace {

ProjectRecord project(const std::string& name, std::vector<std::string> tags = {"wot"},
                      Platform platform = Platform::Raspberry) {
  auto r = decode_project(testing::mearm_submission());
  r.name = name;
  r.tags = std::move(tags);
  r.platform = platform;
  r.short_description = "a project";
  r.long_description = "nothing special here";
  r.owner = "u-owner";
  return canonicalize(r);
}

StoreOptions options_for(const TempDir& dir, bool sync = false) {
  StoreOptions o;
  o.data_dir = dir.path();
  o.sync = sync;
  return o;
}

std::vector<ProjectRecord> all_records(const RegistryStore& store, const std::vector<std::string>& ids) {
  std::vector<ProjectRecord> out;
  for (const auto& id : ids) {
    if (auto r = store.get_project(id)) out.push_back(*r);
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST_CASE("tokenizer") {
  CHECK(tokenize("Sense HAT") == std::vector<std::string>{"sense", "hat"});
  CHECK(tokenize("  wot--mearm_pi 2.0 ") == std::vector<std::string>{"wot", "mearm", "pi", "2", "0"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("B\xC3\xBC" "cher!") == std::vector<std::string>{"b\xC3\xBC" "cher"});
}

TEST_CASE("stored project is retrievable by the returned id") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto id = store.put_project(project("wot-mearmpi"));
  CHECK(id.rfind("wot-mearmpi-", 0) == 0);
  CHECK(id.size() == std::string("wot-mearmpi-").size() + 6);
  auto got = store.get_project(id);
  REQUIRE(got);
  CHECK(got->name == "wot-mearmpi");
  CHECK(got->id == id);
  CHECK(got->created_at);
  CHECK(got->stats == Stats{});
  CHECK_FALSE(store.get_project("nope"));
}

TEST_CASE("a unique tag finds exactly the stored project") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  store.put_project(project("other project", {"common"}));
  auto id = store.put_project(project("wot-mearmpi", {"uniquetag42"}));
  auto result = store.search(SearchQuery::from_text("uniquetag42"));
  REQUIRE(result.total == 1);
  CHECK(result.hits[0].project_id == id);
}

TEST_CASE("identical payloads get distinct ids (linear model alongside)") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  std::vector<std::pair<std::string, ProjectRecord>> model;
  for (int i = 0; i < 5; ++i) {
    auto r = project("same payload");
    auto id = store.put_project(r);
    for (const auto& [other, _] : model) CHECK(other != id);
    model.emplace_back(id, r);
  }
  CHECK(store.project_count() == model.size());
  for (const auto& [id, r] : model) {
    auto got = store.get_project(id);
    REQUIRE(got);
    CHECK(encode_submission(*got) == encode_submission(r));
  }
}

TEST_CASE("ranked search over the Sense HAT fixture") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto a = store.put_project(project("Sense HAT server", {"raspberry"}));
  auto b = store.put_project(project("hue bridge", {"lighting"}));
  auto c = store.put_project(project("Weather station", {"sensehat", "hat"}));
  auto d = store.put_project(project("Pressure logger", {"sensehat"}));

  auto q = SearchQuery::from_text("sense hat");
  auto result = store.search(q);
  REQUIRE(result.hits.size() == 2);
  CHECK(result.hits[0].project_id == a);
  CHECK(result.hits[0].score == 6);
  CHECK(result.hits[1].project_id == c);
  CHECK(result.hits[1].score == 2);
  for (const auto& h : result.hits) {
    CHECK(h.project_id != b);
    CHECK(h.project_id != d); // "sensehat" is a single token
  }
  CHECK(result.hits == testing::brute_force_search(all_records(store, {a, b, c, d}), q).hits);
}

TEST_CASE("empty terms with a platform filter return exactly that platform") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto p1 = store.put_project(project("pi one", {"x"}, Platform::Raspberry));
  store.put_project(project("esp board", {"x"}, Platform::Esp));
  auto p2 = store.put_project(project("pi two", {"x"}, Platform::Raspberry));
  store.record_download(p2);

  SearchQuery q;
  q.platform = Platform::Raspberry;
  auto result = store.search(q);
  REQUIRE(result.total == 2);
  CHECK(result.hits[0].project_id == p2); // more downloads first
  CHECK(result.hits[1].project_id == p1);
  CHECK(result.hits[0].score == 0);
}

TEST_CASE("terms matching nothing") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  store.put_project(project("wot-mearmpi"));
  auto result = store.search(SearchQuery::from_text("zeppelin"));
  CHECK(result.hits.empty());
  CHECK(result.total == 0);
}

TEST_CASE("pagination and limit bounds") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  for (int i = 0; i < 7; ++i) store.put_project(project("item " + std::to_string(i)));
  SearchQuery q;
  q.limit = 3;
  q.offset = 5;
  auto result = store.search(q);
  CHECK(result.total == 7);
  CHECK(result.hits.size() == 2);
  q.offset = 50;
  CHECK(store.search(q).hits.empty());
  q.limit = 101;
  CHECK_THROWS_AS(store.search(q), std::invalid_argument);
  q.limit = 0;
  CHECK_THROWS_AS(store.search(q), std::invalid_argument);
}

TEST_CASE("ratings: averages, replacement, range") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto id = store.put_project(project("rated project"));

  auto first = store.record_rating(id, 4, "u-a");
  REQUIRE(first);
  CHECK(first->average == doctest::Approx(4.0));
  auto second = store.record_rating(id, 5, "u-b");
  CHECK(second->average == doctest::Approx(4.5));
  CHECK(second->count == 2);

  auto other = store.put_project(project("another project"));
  store.record_rating(other, 2, "u-a");
  auto replaced = store.record_rating(other, 5, "u-a");
  CHECK(replaced->average == doctest::Approx(5.0));
  CHECK(replaced->count == 1);
  auto stats = store.get_project(other)->stats;
  CHECK(stats.rating_count == 1);
  CHECK(stats.rating_sum == 5);

  CHECK_THROWS_AS(store.record_rating(id, 0, "u-a"), std::out_of_range);
  CHECK_THROWS_AS(store.record_rating(id, 6, "u-a"), std::out_of_range);
  CHECK_FALSE(store.record_rating("missing", 3, "u-a"));
}

TEST_CASE("deletion is owner-only") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto id = store.put_project(project("deletable project"));
  CHECK(store.delete_project(id, "u-intruder") == DeleteOutcome::Forbidden);
  CHECK(store.get_project(id));
  CHECK(store.delete_project(id, "u-owner") == DeleteOutcome::Deleted);
  CHECK_FALSE(store.get_project(id));
  CHECK(store.delete_project(id, "u-owner") == DeleteOutcome::NotFound);
  CHECK(store.search(SearchQuery::from_text("deletable")).total == 0);
}

TEST_CASE("concurrent downloads are counted exactly") {
  TempDir dir;
  RegistryStore store(options_for(dir, true));
  auto id = store.put_project(project("popular project"));
  constexpr int kThreads = 16;
  constexpr int kPerThread = 8;
  std::vector<std::thread> threads;
  for (int t = 0; t < kThreads; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < kPerThread; ++i) store.record_download(id);
    });
  }
  for (auto& t : threads) t.join();
  CHECK(store.get_project(id)->stats.downloads == kThreads * kPerThread);
}

TEST_CASE("state survives close and reopen, with and without compaction") {
  TempDir dir;
  std::string a, b, user_id;
  std::string token = random_token();
  {
    RegistryStore store(options_for(dir, true));
    a = store.put_project(project("persistent alpha"));
    b = store.put_project(project("persistent beta"));
    store.record_download(a);
    store.record_download(a);
    store.record_rating(a, 3, "u-x");
    store.record_rating(a, 5, "u-x");
    store.delete_project(b, "u-owner");
    user_id = store.put_user(UserAccount{"", "maker", hash_password("secret-pass"), now_utc()})->id;
    store.put_token(ApiToken{token, user_id, now_utc()});
  }
  auto verify = [&](RegistryStore& store) {
    auto got = store.get_project(a);
    REQUIRE(got);
    CHECK(got->stats == Stats{2, 1, 5});
    CHECK_FALSE(store.get_project(b));
    CHECK(store.search(SearchQuery::from_text("persistent")).total == 1);
    CHECK(store.get_user_by_name("maker")->id == user_id);
    CHECK(store.resolve_token(token)->user_id == user_id);
  };
  {
    RegistryStore store(options_for(dir, true));
    verify(store);
    store.compact();
    CHECK(std::filesystem::file_size(dir.path() / "projects.log") == 0);
    CHECK(std::filesystem::exists(dir.path() / "projects.snapshot"));
  }
  {
    RegistryStore store(options_for(dir, true));
    verify(store);
    store.record_download(a);
  }
  RegistryStore store(options_for(dir, true));
  CHECK(store.get_project(a)->stats.downloads == 3);
}

TEST_CASE("automatic compaction keeps state intact") {
  TempDir dir;
  auto opts = options_for(dir);
  opts.compact_threshold = 4;
  std::string id;
  {
    RegistryStore store(opts);
    id = store.put_project(project("compacted project"));
    for (int i = 0; i < 9; ++i) store.record_download(id);
  }
  RegistryStore store(opts);
  CHECK(store.get_project(id)->stats.downloads == 9);
}

TEST_CASE("replaying a log over a newer snapshot is idempotent") {
  TempDir dir;
  std::string id;
  {
    RegistryStore store(options_for(dir));
    id = store.put_project(project("idempotent replay"));
    store.record_download(id);
    store.record_rating(id, 4, "u-1");
  }
  auto log_copy = dir.path() / "projects.log.bak";
  auto ratings_copy = dir.path() / "ratings.log.bak";
  std::filesystem::copy_file(dir.path() / "projects.log", log_copy);
  std::filesystem::copy_file(dir.path() / "ratings.log", ratings_copy);
  {
    RegistryStore store(options_for(dir));
    store.compact();
  }
  // Simulate a crash between writing snapshots and truncating logs.
  std::filesystem::copy_file(log_copy, dir.path() / "projects.log",
                             std::filesystem::copy_options::overwrite_existing);
  std::filesystem::copy_file(ratings_copy, dir.path() / "ratings.log",
                             std::filesystem::copy_options::overwrite_existing);
  RegistryStore store(options_for(dir));
  CHECK(store.project_count() == 1);
  CHECK(store.get_project(id)->stats == Stats{1, 1, 4});
}

TEST_CASE("torn tail is ignored, corruption elsewhere is an error") {
  TempDir dir;
  std::string id;
  {
    RegistryStore store(options_for(dir));
    id = store.put_project(project("torn tail project"));
  }
  {
    std::ofstream out(dir.path() / "projects.log", std::ios::app);
    out << R"({"op":"download","id":")" << id;
  }
  {
    RegistryStore store(options_for(dir));
    CHECK(store.get_project(id)->stats.downloads == 0);
    CHECK(store.record_download(id) == 1u);
  }
  {
    RegistryStore store(options_for(dir));
    CHECK(store.get_project(id)->stats.downloads == 1);
  }
  {
    std::ofstream out(dir.path() / "projects.log", std::ios::app);
    out << "garbage\n";
  }
  CHECK_THROWS_AS(RegistryStore(options_for(dir)), StoreError);
}

TEST_CASE("a data directory can be opened by one store at a time") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  CHECK_THROWS_AS(RegistryStore(options_for(dir)), StoreError);
}

TEST_CASE("users and tokens") {
  TempDir dir;
  RegistryStore store(options_for(dir));
  auto digest = hash_password("hunter22");
  auto user = store.put_user(UserAccount{"", "maker", digest, now_utc()});
  REQUIRE(user);
  CHECK(user->id.rfind("u-", 0) == 0);
  CHECK_FALSE(store.put_user(UserAccount{"", "maker", digest, now_utc()}));
  CHECK(verify_password(store.get_user_by_name("maker")->password_digest, "hunter22"));
  CHECK_FALSE(verify_password(digest, "hunter23"));

  auto token = random_token();
  CHECK(token.size() == 43);
  CHECK(token.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_") ==
        std::string::npos);
  store.put_token(ApiToken{token, user->id, now_utc()});
  CHECK(store.resolve_token(token)->user_id == user->id);
  CHECK_FALSE(store.resolve_token(random_token()));
  CHECK(slurp(dir.path() / "users.log").find(token) == std::string::npos);
}

TEST_CASE("index-backed search equals the linear scan on random corpora") {
  std::mt19937 rng(1234);
  for (int corpus = 0; corpus < 15; ++corpus) {
    TempDir dir;
    RegistryStore store(options_for(dir));
    std::vector<std::string> ids;
    for (int i = 0, n = static_cast<int>(rng() % 40); i < n; ++i) {
      ids.push_back(store.put_project(testing::random_project(rng)));
      for (int d = 0, k = static_cast<int>(rng() % 3); d < k; ++d) store.record_download(ids.back());
    }
    if (!ids.empty() && rng() % 2) store.delete_project(ids[rng() % ids.size()], "u-owner");
    auto records = all_records(store, ids);
    for (int q = 0; q < 20; ++q) {
      auto query = testing::random_query(rng);
      auto expected = testing::brute_force_search(records, query);
      auto actual = store.search(query);
      CHECK(actual.total == expected.total);
      CHECK(actual.hits == expected.hits);
    }
  }
}
