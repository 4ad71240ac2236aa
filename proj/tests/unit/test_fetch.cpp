#include <doctest.h>

#include "fixtures.hpp"
#include "stub_transport.hpp"
#include "wotforge/fetch/readme_fetcher.hpp"
#include "wotforge/fetch/url.hpp"

#include <httplib.h>

#include <cstdlib>
#include <thread>

using namespace wotforge;
using namespace wotforge::fetch;
using wotforge::testing::StubTransport;

namespace {

ProjectRecord record_with(std::optional<std::string> readme, std::optional<std::string> github) {
  auto r = decode_project(testing::mearm_submission());
  r.readme = std::move(readme);
  r.github = std::move(github);
  return r;
}

struct ManualClock {
  std::chrono::system_clock::time_point now{std::chrono::seconds{1'700'000'000}};
};

FetcherOptions options_with(ManualClock& clock) {
  FetcherOptions o;
  o.clock = [&clock] { return clock.now; };
  return o;
}

const std::string kRaw = "https://raw.githubusercontent.com/example/wot-mearmpi/";

} // namespace

TEST_CASE("url parsing") {
  auto u = parse_url("HTTPS://User@Example.COM:8443/a/b?q=1#frag");
  REQUIRE(u);
  CHECK(u->scheme == "https");
  CHECK(u->host == "example.com");
  CHECK(u->port == 8443);
  CHECK(u->target == "/a/b?q=1");
  CHECK(u->str() == "https://example.com:8443/a/b?q=1");
  CHECK(parse_url("http://h")->target == "/");
  CHECK(parse_url("http://[::1]:80/x")->host == "[::1]");
  CHECK_FALSE(parse_url("mailto:a@b"));
  CHECK_FALSE(parse_url("http://h:99999/"));
  CHECK_FALSE(parse_url("http:///path"));

  auto base = *parse_url("https://a.org/x/y/z.md?v=1");
  CHECK(resolve_location(base, "/root")->str() == "https://a.org/root");
  CHECK(resolve_location(base, "other.md")->str() == "https://a.org/x/y/other.md");
  CHECK(resolve_location(base, "//b.org/p")->str() == "https://b.org/p");
  CHECK(resolve_location(base, "http://c.org/q")->str() == "http://c.org/q");
}

TEST_CASE("forge table candidates") {
  auto table = ForgeTable::defaults();
  auto c = table.readme_candidates("https://github.com/example/wot-mearmpi.git/");
  REQUIRE(c.size() == 4);
  CHECK(c[0] == kRaw + "main/README.md");
  CHECK(c[1] == kRaw + "main/readme.md");
  CHECK(c[2] == kRaw + "master/README.md");
  CHECK(c[3] == kRaw + "master/readme.md");
  CHECK(table.readme_candidates("https://gitlab.com/acme/lamp")[0] ==
        "https://gitlab.com/acme/lamp/-/raw/main/README.md");
  CHECK(table.readme_candidates("https://git.example.org/acme/lamp").empty());
  CHECK(table.readme_candidates("https://github.com/onlyowner").empty());
  CHECK(table.archive_candidates("https://git.example.org:3000/acme/lamp") ==
        std::vector<std::string>{"https://git.example.org:3000/acme/lamp/archive/refs/heads/main.tar.gz",
                                 "https://git.example.org:3000/acme/lamp/archive/refs/heads/master.tar.gz"});

  auto custom = ForgeTable::from_json(Json::parse(
      R"({"branches":["trunk"],"forges":{"git.example.org":{"readme":"{origin}/raw/{owner}/{repo}/{branch}/{file}"}}})"));
  CHECK(custom.readme_candidates("https://git.example.org/acme/lamp") ==
        std::vector<std::string>{"https://git.example.org/raw/acme/lamp/trunk/README.md",
                                 "https://git.example.org/raw/acme/lamp/trunk/readme.md"});
  CHECK(ForgeTable::from_json(table.to_json()).to_json() == table.to_json());
  CHECK_THROWS_AS(ForgeTable::from_json(Json::parse(R"({"branches":"main"})")), std::invalid_argument);
}

TEST_CASE("explicit readme URI wins") {
  auto stub = std::make_shared<StubTransport>();
  stub->set("https://docs.example.org/README.md", 200, "# MeArm\n");
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with("https://docs.example.org/README.md", std::nullopt));
  CHECK(result.source == ReadmeSource::ReadmeUri);
  CHECK(result.body == "# MeArm\n");
  CHECK(stub->calls() == 1);
  auto req = stub->requests().front();
  CHECK(req.headers.at("User-Agent") == "wotforge-registry/0.1.0");
}

TEST_CASE("repository guesses are tried in order") {
  auto stub = std::make_shared<StubTransport>();
  stub->set(kRaw + "master/README.md", 200, "# from master");
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with(std::nullopt, "https://github.com/example/wot-mearmpi"));
  CHECK(result.source == ReadmeSource::RepoGuess);
  CHECK(result.body == "# from master");
  auto reqs = stub->requests();
  REQUIRE(reqs.size() == 3);
  CHECK(reqs[0].url == kRaw + "main/README.md");
  CHECK(reqs[1].url == kRaw + "main/readme.md");
  CHECK(reqs[2].url == kRaw + "master/README.md");
}

TEST_CASE("failing readme URI falls through to repository guesses") {
  auto stub = std::make_shared<StubTransport>();
  stub->set(kRaw + "main/README.md", 200, "guess");
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(
      record_with("https://docs.example.org/gone.md", "https://github.com/example/wot-mearmpi"));
  CHECK(result.source == ReadmeSource::RepoGuess);
}

TEST_CASE("all candidates missing falls back to the long description, cached afterwards") {
  auto stub = std::make_shared<StubTransport>();
  ReadmeFetcher fetcher(stub);
  auto record = record_with(std::nullopt, "https://github.com/example/wot-mearmpi");
  auto result = fetcher.fetch_readme(record);
  CHECK(result.source == ReadmeSource::FallbackDescription);
  CHECK(result.body == record.long_description);
  CHECK(stub->calls() == 4);

  stub->reset_log();
  auto again = fetcher.fetch_readme(record);
  CHECK(again.source == ReadmeSource::FallbackDescription);
  CHECK(stub->calls() == 0);
}

TEST_CASE("no links at all needs no upstream request") {
  auto stub = std::make_shared<StubTransport>();
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with(std::nullopt, std::nullopt));
  CHECK(result.source == ReadmeSource::FallbackDescription);
  CHECK(stub->calls() == 0);
}

TEST_CASE("non-http readme schemes are never fetched") {
  auto stub = std::make_shared<StubTransport>();
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with("ftp://example.org/README.md", "ssh://git@example.org/a/b"));
  CHECK(result.source == ReadmeSource::FallbackDescription);
  CHECK(stub->calls() == 0);
}

TEST_CASE("cache expires after the TTL and revalidates with ETag") {
  ManualClock clock;
  auto stub = std::make_shared<StubTransport>();
  int served = 0;
  stub->set_handler("https://docs.example.org/README.md", [&](const HttpRequest& req) {
    HttpResponse r;
    ++served;
    if (req.headers.count("If-None-Match") && req.headers.at("If-None-Match") == "\"v1\"") {
      r.status = 304;
    } else {
      r.status = 200;
      r.body = "body v1";
      r.headers["etag"] = "\"v1\"";
    }
    return r;
  });
  ReadmeFetcher fetcher(stub, options_with(clock));
  auto record = record_with("https://docs.example.org/README.md", std::nullopt);

  CHECK(fetcher.fetch_readme(record).body == "body v1");
  clock.now += std::chrono::seconds(299);
  CHECK(fetcher.fetch_readme(record).body == "body v1");
  CHECK(served == 1);

  clock.now += std::chrono::seconds(2);
  auto revalidated = fetcher.fetch_readme(record);
  CHECK(served == 2);
  CHECK(revalidated.source == ReadmeSource::ReadmeUri);
  CHECK(revalidated.body == "body v1");
  CHECK(stub->requests().back().headers.at("If-None-Match") == "\"v1\"");
}

TEST_CASE("oversized README is truncated with a marker") {
  auto stub = std::make_shared<StubTransport>();
  std::string big(600 * 1024, 'x');
  big[512 * 1024 - 1] = '\xC3'; // a two-byte sequence straddling the limit
  big[512 * 1024] = '\xA9';
  stub->set("https://docs.example.org/README.md", 200, big);
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with("https://docs.example.org/README.md", std::nullopt));
  CHECK(result.body.size() == 512 * 1024 - 1 + kTruncationMarker.size());
  CHECK(result.body.substr(result.body.size() - kTruncationMarker.size()) == kTruncationMarker);
}

TEST_CASE("redirects: at most three, http(s) only") {
  auto stub = std::make_shared<StubTransport>();
  auto redirect = [&](const std::string& from, const std::string& to) {
    stub->set(from, 302, "", {{"location", to}});
  };
  redirect("https://a.org/1", "/2");
  redirect("https://a.org/2", "https://a.org/3");
  redirect("https://a.org/3", "4");
  stub->set("https://a.org/4", 200, "landed");
  auto ok = get_following_redirects(*stub, HttpRequest{"https://a.org/1", {}, {}});
  CHECK(ok.status == 200);
  CHECK(ok.body == "landed");

  redirect("https://a.org/4", "https://a.org/5");
  stub->set("https://a.org/5", 200, "too far");
  stub->reset_log();
  auto capped = get_following_redirects(*stub, HttpRequest{"https://a.org/1", {}, {}});
  CHECK(capped.status == 302);
  CHECK(stub->calls() == 4);

  redirect("https://a.org/evil", "file:///etc/passwd");
  stub->reset_log();
  auto refused = get_following_redirects(*stub, HttpRequest{"https://a.org/evil", {}, {}});
  CHECK(refused.status == 0);
  CHECK(stub->calls() == 1);
}

TEST_CASE("transport errors are absorbed into the fallback") {
  auto stub = std::make_shared<StubTransport>();
  stub->set_handler("https://docs.example.org/README.md", [](const HttpRequest&) {
    HttpResponse r;
    r.error = "Connection refused";
    return r;
  });
  ReadmeFetcher fetcher(stub);
  auto result = fetcher.fetch_readme(record_with("https://docs.example.org/README.md", std::nullopt));
  CHECK(result.source == ReadmeSource::FallbackDescription);
}

TEST_CASE("concurrent lookups of one URI share one upstream request") {
  auto stub = std::make_shared<StubTransport>();
  stub->set("https://docs.example.org/README.md", 200, "shared");
  stub->set_delay(std::chrono::milliseconds(100));
  ReadmeFetcher fetcher(stub);
  auto record = record_with("https://docs.example.org/README.md", std::nullopt);
  std::vector<std::thread> threads;
  std::atomic<int> good{0};
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      if (fetcher.fetch_readme(record).body == "shared") ++good;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(good == 8);
  CHECK(stub->calls() == 1);
}

TEST_CASE("httplib transport against a local server") {
  httplib::Server server;
  server.Get("/moved", [](const httplib::Request&, httplib::Response& res) {
    res.set_redirect("/README.md");
  });
  server.Get("/README.md", [](const httplib::Request& req, httplib::Response& res) {
    res.set_header("ETag", "\"abc\"");
    res.set_content("# local " + req.get_header_value("User-Agent"), "text/markdown");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  auto transport = std::make_shared<HttplibTransport>();
  auto base = "http://127.0.0.1:" + std::to_string(port);
  ReadmeFetcher fetcher(transport);
  auto result = fetcher.fetch_readme(record_with(base + "/moved", std::nullopt));
  CHECK(result.source == ReadmeSource::ReadmeUri);
  CHECK(result.body == "# local wotforge-registry/0.1.0");

  auto missing = transport->get(HttpRequest{base + "/nothing", {}, std::chrono::milliseconds(2000)});
  CHECK(missing.status == 404);

  server.stop();
  thread.join();
  auto refused = transport->get(HttpRequest{base + "/README.md", {}, std::chrono::milliseconds(500)});
  CHECK(refused.status == 0);
  CHECK_FALSE(refused.error.empty());
}

TEST_CASE("live GitHub README (opt-in: WOTFORGE_LIVE_TESTS=1)") {
  const char* live = std::getenv("WOTFORGE_LIVE_TESTS");
  if (!live || std::string(live) != "1") return;
  ReadmeFetcher fetcher(std::make_shared<HttplibTransport>());
  auto result = fetcher.fetch_readme(record_with(std::nullopt, "https://github.com/eclipse-thingweb/node-wot"));
  CHECK(result.source == ReadmeSource::RepoGuess);
  CHECK_FALSE(result.body.empty());
}
