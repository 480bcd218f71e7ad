#include <fstream>
#include <set>
#include <thread>

#include "catch_amalgamated.hpp"
#include "fixtures.hpp"
#include "voicekit/session/store.hpp"

using namespace voicekit;
using namespace voicekit::session;
using fixture::full_corpus;

namespace {

std::shared_ptr<MemoryLog> memlog() { return std::make_shared<MemoryLog>(); }

Session fresh(std::uint64_t seed, std::shared_ptr<EventLog> log, int quota = kDefaultTrainingQuota,
              Clock clock = fixture::ticking_clock())
{
    return Session::create("t1", presets::tanh(), full_corpus(), SessionOptions{seed, quota, "corpus"}, std::move(log),
                           std::move(clock));
}

// Deterministic agent: listens through training and picks an option derived from the prompt in testing.
void step(Session& s)
{
    const auto p = s.next_stimulus();
    std::optional<std::string> label;
    if (p.expects_answer) {
        label = p.options[(p.phase_done * 7 + p.stimulus_id.size()) % p.options.size()];
    } else if (p.phase_done % 3 == 0) {
        label = p.options[p.phase_done % p.options.size()];
    }
    s.submit_answer(p.stimulus_id, label);
}

void run_to_end(Session& s)
{
    while (!s.complete()) {
        step(s);
    }
}

std::vector<std::string> lines(const std::vector<Event>& events, std::size_t from = 0)
{
    std::vector<std::string> out;
    for (std::size_t i = from; i < events.size(); ++i) {
        out.push_back(event_line(events[i]));
    }
    return out;
}

std::map<std::string, int> plays_by_phase(const std::vector<Event>& events)
{
    std::map<std::string, int> out;
    for (const auto& e : events) {
        if (e.kind == EventKind::Presented) {
            ++out[e.phase];
        }
    }
    return out;
}

} // namespace

TEST_CASE("event lines round trip", "[session]")
{
    Event e;
    e.seq = 7;
    e.kind = EventKind::Answer;
    e.timestamp_ms = 123;
    e.phase = "testing";
    e.stimulus_id = "obj_duck_p005";
    e.truth_label = "duck";
    e.given_label = "cup";
    const auto back = parse_event_line(event_line(e));
    CHECK(event_line(back) == event_line(e));
    CHECK(back.given_label == std::optional<std::string>("cup"));
    CHECK_THROWS_AS(parse_event_line("{\"seq\": 1"), FormatError);
    CHECK_THROWS_AS(parse_event_line("{\"seq\":0,\"kind\":\"jump\"}"), FormatError);
}

TEST_CASE("first lesson queues 45 plays, reproducibly per seed", "[session]")
{
    auto a = fresh(11, memlog());
    auto b = fresh(11, memlog());
    const auto& pa = a.plan().trials;
    std::vector<std::string> qa, qb;
    std::map<std::string, int> per_stimulus;
    for (const auto& t : pa) {
        if (t.phase == "lesson1") {
            qa.push_back(t.stimulus_id);
            ++per_stimulus[t.stimulus_id];
        }
    }
    for (const auto& t : b.plan().trials) {
        if (t.phase == "lesson1") {
            qb.push_back(t.stimulus_id);
        }
    }
    CHECK(qa.size() == 45);
    CHECK(qa == qb);
    CHECK(per_stimulus.size() == 3);
    for (const auto& [id, n] : per_stimulus) {
        CHECK(n == 15);
    }
    const auto p = a.next_stimulus();
    CHECK(p.phase == "lesson1");
    CHECK(p.options == std::vector<std::string>{"circle", "triangle", "square"});
    CHECK(p.phase_total == 45);
    CHECK(a.remaining_plays() == pa.size());
    CHECK(fresh(12, memlog()).plan().trials[0].phase == "lesson1");
}

TEST_CASE("session creation rejects an incomplete lesson set", "[session]")
{
    auto corpus = std::make_shared<stimuli::StimulusCorpus>(*full_corpus());
    std::erase_if(corpus->items, [](const auto& item) { return item.spec.lesson == stimuli::Lesson::Orientation; });
    auto log = memlog();
    CHECK_THROWS_AS(Session::create("x", presets::primary(), corpus, {}, log), InvalidArgument);
    CHECK(log->events().empty());

    auto one_missing = std::make_shared<stimuli::StimulusCorpus>(*full_corpus());
    auto it = std::find_if(one_missing->items.begin(), one_missing->items.end(),
                           [](const auto& item) { return item.spec.lesson == stimuli::Lesson::Location; });
    one_missing->items.erase(it);
    CHECK_THROWS_AS(Session::create("x", presets::primary(), one_missing, {}, memlog()), InvalidArgument);
}

TEST_CASE("the 46th play opens lesson 2 after a rest", "[session]")
{
    auto log = memlog();
    auto s = fresh(3, log);
    for (int i = 0; i < 45; ++i) {
        const auto p = s.next_stimulus();
        CHECK(p.phase == "lesson1");
        CHECK_FALSE(p.expects_answer);
        CHECK(p.reveal_after);
        const auto fb = s.submit_answer(p.stimulus_id, std::nullopt);
        REQUIRE(fb.truth.has_value());
        CHECK_FALSE(fb.correct.has_value());
    }
    CHECK(log->events().back().kind == EventKind::Rest);
    CHECK(log->events().back().next_phase == "lesson2");
    CHECK(s.phase() == "rest");
    const auto p = s.next_stimulus();
    CHECK(p.phase == "lesson2");
    CHECK(p.rest_before);
    CHECK(p.phase_total == 60);
    CHECK(p.options.size() == 4);
}

TEST_CASE("training feedback reveals truth and correctness", "[session]")
{
    auto s = fresh(5, memlog());
    const auto p = s.next_stimulus();
    const auto& truth = s.plan().trials[0].truth_label;
    const auto right = s.submit_answer(p.stimulus_id, truth);
    CHECK(right.truth == truth);
    CHECK(right.correct == true);
    const auto q = s.next_stimulus();
    const auto wrong_label = q.options[0] == s.plan().trials[1].truth_label ? q.options[1] : q.options[0];
    CHECK(s.submit_answer(q.stimulus_id, wrong_label).correct == false);
}

TEST_CASE("testing is blinded and strict", "[session]")
{
    auto log = memlog();
    auto s = fresh(9, log);
    while (s.phase_kind() != PhaseKind::Testing) {
        step(s);
    }
    const auto p = s.next_stimulus();
    CHECK(p.phase == "testing");
    CHECK(p.expects_answer);
    CHECK_FALSE(p.reveal_after);
    CHECK(p.options.size() == 10);
    CHECK(p.phase_total == 100);
    CHECK(s.next_stimulus().stimulus_id == p.stimulus_id);

    const auto before = log->events().size();
    CHECK_THROWS_AS(s.submit_answer(p.stimulus_id, std::nullopt), InvalidArgument);
    CHECK_THROWS_AS(s.submit_answer(p.stimulus_id, "circle"), InvalidArgument);
    CHECK_THROWS_AS(s.submit_answer("obj_nothing", p.options[0]), StateError);
    CHECK(log->events().size() == before);
    CHECK(s.pending());

    const auto fb = s.submit_answer(p.stimulus_id, p.options[0]);
    CHECK_FALSE(fb.truth.has_value());
    CHECK_FALSE(fb.correct.has_value());
    CHECK(log->events().back().feedback_shown == false);
    const auto after = log->events().size();
    CHECK_THROWS_AS(s.submit_answer(p.stimulus_id, p.options[0]), StateError);
    CHECK(log->events().size() == after);
    CHECK_THROWS_AS(s.finalize(), StateError);
}

TEST_CASE("out-of-order answers leave the state unchanged", "[session]")
{
    auto log = memlog();
    auto s = fresh(4, log);
    CHECK_THROWS_AS(s.submit_answer(s.plan().trials[0].stimulus_id, std::nullopt), StateError);
    CHECK(log->events().size() == 1);
    const auto p = s.next_stimulus();
    const auto other = p.stimulus_id == "shapes_circle" ? "shapes_square" : "shapes_circle";
    CHECK_THROWS_AS(s.submit_answer(other, std::nullopt), StateError);
    CHECK(s.answers().empty());
    CHECK(s.pending());
}

TEST_CASE("full session play quotas", "[session]")
{
    for (int quota : {15, 3, 20}) {
        auto log = memlog();
        auto s = fresh(21, log, quota);
        run_to_end(s);
        const auto plays = plays_by_phase(log->events());
        CHECK(plays.at("lesson1") == 45);
        CHECK(plays.at("lesson2") == 60);
        CHECK(plays.at("lesson3") == 90);
        CHECK(plays.at("lesson4") == 75);
        CHECK(plays.at("lesson5") == 75);
        int training = 0;
        for (int c = 0; c < 10; ++c) {
            CHECK(plays.at(training_phase(static_cast<std::size_t>(c))) == quota);
            training += plays.at(training_phase(static_cast<std::size_t>(c)));
        }
        CHECK(training == 10 * quota);
        CHECK(plays.at("testing") == 100);

        int rests = 0, test_answers = 0;
        std::set<std::string> tested;
        for (const auto& e : log->events()) {
            rests += e.kind == EventKind::Rest ? 1 : 0;
            if (e.kind == EventKind::Answer && e.phase == "testing") {
                ++test_answers;
                CHECK_FALSE(e.feedback_shown);
                CHECK(e.given_label.has_value());
                tested.insert(e.stimulus_id);
            }
        }
        CHECK(rests == 5);
        CHECK(test_answers == 100);
        CHECK(tested.size() == 100);
        CHECK(s.phase() == "complete");
        CHECK_THROWS_AS(s.next_stimulus(), StateError);
        CHECK_THROWS_AS(s.submit_answer("x", std::nullopt), StateError);
    }
    CHECK_THROWS_AS(fresh(1, memlog(), 0), InvalidArgument);
}

TEST_CASE("replay from every log prefix reproduces the continuation", "[session][replay]")
{
    auto log = memlog();
    auto s = fresh(77, log);
    run_to_end(s);
    const auto& events = log->events();
    const auto full = lines(events);
    const auto expected_report = session_report_kv(s.finalize()).str();
    for (std::size_t n = 1; n <= events.size(); ++n) {
        auto tail = memlog();
        auto r = Session::replay(std::span<const Event>(events.data(), n), full_corpus(), tail,
                                 fixture::ticking_clock(1'000'000 + static_cast<std::int64_t>(n)));
        REQUIRE(r.events_applied() == n);
        run_to_end(r);
        const auto cont = lines(tail->events());
        const std::vector<std::string> want(full.begin() + static_cast<std::ptrdiff_t>(n), full.end());
        REQUIRE(cont == want);
        REQUIRE(session_report_kv(r.finalize()).str() == expected_report);
    }
}

TEST_CASE("replay rejects inconsistent logs", "[session][replay]")
{
    auto log = memlog();
    auto s = fresh(2, log);
    for (int i = 0; i < 5; ++i) {
        step(s);
    }
    auto events = log->events();
    CHECK_THROWS_AS(Session::replay({}, full_corpus(), memlog()), FormatError);

    auto gap = events;
    gap.erase(gap.begin() + 2);
    CHECK_THROWS_AS(Session::replay(gap, full_corpus(), memlog()), FormatError);

    auto wrong = events;
    wrong[1].stimulus_id = "shapes_nothing";
    CHECK_THROWS_AS(Session::replay(wrong, full_corpus(), memlog()), FormatError);

    auto other = std::make_shared<stimuli::StimulusCorpus>(*full_corpus());
    other->items.back().image = GrayImage(32, 32, 7);
    CHECK_THROWS_AS(Session::replay(events, other, memlog()), StateError);
}

TEST_CASE("finalize", "[session]")
{
    auto s = fresh(31, memlog());
    CHECK_THROWS_AS(s.finalize(), StateError);
    while (!s.complete()) {
        const auto p = s.next_stimulus();
        const auto& truth = s.plan().trials[s.plan().trials.size() - s.remaining_plays()].truth_label;
        s.submit_answer(p.stimulus_id, p.expects_answer ? std::optional<std::string>(truth) : std::nullopt);
    }
    const auto report = s.finalize();
    CHECK(report.metrics.macro_f1 == 1.0);
    CHECK(report.metrics.n_items == 100);
    CHECK(report.confusion.labels.size() == 10);
    CHECK(report.scheme == "TANH");

    const auto back = parse_session_report(voicekit::detail::KeyValues::parse(session_report_kv(report).str()));
    CHECK(session_report_kv(back).str() == session_report_kv(report).str());
}

TEST_CASE("file log survives an interrupted write", "[session][store]")
{
    fixture::TempDir dir;
    SessionStore store(dir.str(), full_corpus(), "corpus", fixture::ticking_clock());
    const auto id = store.create(presets::primary(), 8);
    for (int i = 0; i < 10; ++i) {
        store.with_session(id, [](Session& s) { step(s); });
    }
    const auto path = store.log_path(id);
    const auto intact = read_event_log(path);
    {
        std::ofstream out(path, std::ios::app | std::ios::binary);
        out << R"({"seq":)" << intact.size() << R"(,"kind":"presen)";
    }
    CHECK(read_event_log(path).size() == intact.size());

    SessionStore reopened(dir.str(), full_corpus(), "corpus", fixture::ticking_clock());
    const auto answered = reopened.with_session(id, [](Session& s) { return s.answers().size(); });
    CHECK(answered == 10);
    reopened.with_session(id, [](Session& s) { step(s); });
    const auto after = read_event_log(path);
    CHECK(after.size() == intact.size() + 2);
    for (std::size_t i = 0; i < after.size(); ++i) {
        CHECK(after[i].seq == i);
    }
    CHECK_THROWS_AS(reopened.with_session("s000000000000", [](Session&) {}), NotFound);
    CHECK_THROWS_AS(reopened.with_session("../etc", [](Session&) {}), NotFound);
}

TEST_CASE("store serializes concurrent commands per session", "[session][store]")
{
    fixture::TempDir dir;
    SessionStore store(dir.str(), full_corpus(), "corpus");
    std::vector<std::string> ids;
    for (int i = 0; i < 3; ++i) {
        ids.push_back(store.create(presets::all()[static_cast<std::size_t>(i)], static_cast<std::uint64_t>(i)));
    }
    std::vector<std::thread> threads;
    std::atomic<int> accepted{0};
    for (int t = 0; t < 8; ++t) {
        threads.emplace_back([&, t] {
            for (int i = 0; i < 40; ++i) {
                store.with_session(ids[static_cast<std::size_t>((t + i) % 3)], [&](Session& s) {
                    step(s);
                    ++accepted;
                });
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    CHECK(accepted == 320);
    std::size_t total = 0;
    for (const auto& id : ids) {
        const auto events = read_event_log(store.log_path(id));
        for (std::size_t i = 0; i < events.size(); ++i) {
            REQUIRE(events[i].seq == i);
        }
        auto replayed = Session::replay(events, full_corpus(), memlog());
        total += replayed.answers().size();
    }
    CHECK(total == 320);
}

TEST_CASE("reports and group aggregation", "[session][store]")
{
    fixture::TempDir dir;
    SessionStore store(dir.str(), full_corpus(), "corpus");
    std::vector<double> f1s;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto id = store.create(presets::long_duration(), seed);
        CHECK_THROWS_AS(store.report(id), StateError);
        store.with_session(id, [](Session& s) { run_to_end(s); });
        f1s.push_back(store.report(id).metrics.macro_f1);
        const auto saved = parse_session_report(voicekit::detail::KeyValues::load(store.report_path(id)));
        CHECK(saved.session_id == id);
    }
    store.create(presets::primary(), 4);
    const auto g = store.group("LONG");
    CHECK(g.session_ids.size() == 3);
    CHECK_THAT(g.f1.mean, Catch::Matchers::WithinAbs(assess::mean_sd(f1s).mean, 1e-12));
    CHECK_THAT(g.f1.sd, Catch::Matchers::WithinAbs(assess::mean_sd(f1s).sd, 1e-12));
    const auto kv = group_report_kv(g);
    CHECK(kv.get("n_sessions") == "3");
    CHECK_THROWS_AS(store.group("PRIMARY"), NotFound);
    CHECK_THROWS_AS(store.group("NOPE"), NotFound);
    CHECK(store.session_ids().size() == 4);
}

TEST_CASE("uniform random agent scores near chance", "[session][slow]")
{
    std::vector<double> f1s;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto s = fresh(seed, memlog());
        voicekit::detail::Rng rng(1000 + seed);
        while (!s.complete()) {
            const auto p = s.next_stimulus();
            s.submit_answer(p.stimulus_id, p.expects_answer
                                               ? std::optional<std::string>(p.options[rng.below(p.options.size())])
                                               : std::nullopt);
        }
        f1s.push_back(s.finalize().metrics.macro_f1);
    }
    const double mean = assess::mean_sd(f1s).mean;
    CHECK(mean >= 0.04);
    CHECK(mean <= 0.16);
}
