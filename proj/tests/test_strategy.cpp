#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "zipfstrat/errors.hpp"
#include "zipfstrat/strategy.hpp"

using namespace zipfstrat;

namespace {

CandidateRanks two(std::size_t r_down, std::size_t r_up) {
    return CandidateRanks{{{"d", r_down, false}, {"u", r_up, false}}, 0};
}

bool tie_free(const RankTable& t) {
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (t.entries[i - 1].count == t.entries[i].count) return false;
    }
    return true;
}

Direction flip(Direction d) {
    return d == Direction::up ? Direction::down : d == Direction::down ? Direction::up : d;
}

}  // namespace

TEST(CandidateWords, Examples) {
    EXPECT_EQ(candidate_words("udu", 4, 1), (std::vector<std::string>{"udud", "uduu"}));
    EXPECT_EQ(candidate_words("ud", 4, 2), (std::vector<std::string>{"uddd", "uddu", "udud", "uduu"}));
    EXPECT_EQ(candidate_words("", 1, 1), (std::vector<std::string>{"d", "u"}));
    EXPECT_EQ(candidate_words("u", 4, 3).size(), 8u);
}

TEST(CandidateWords, Errors) {
    EXPECT_THROW(candidate_words("", 2, 3), InputError);
    EXPECT_THROW(candidate_words("", 1, 0), InputError);
    EXPECT_THROW(candidate_words("ud", 4, 1), InputError);
    EXPECT_THROW(candidate_words("u", 2, 1, Alphabet::three_state(Decimal::from_int(1))), InputError);
}

TEST(RankCandidates, LookupAndUnseen) {
    auto table = RankTable::from_counts({{"uu", 3}, {"dd", 2}, {"ud", 1}});
    auto r = rank_candidates({"uu", "ud"}, table);
    EXPECT_EQ(r.candidates[0].rank, 1u);
    EXPECT_EQ(r.candidates[1].rank, 3u);
    EXPECT_EQ(r.table_size, 3u);

    auto unseen = rank_candidates({"du", "uu"}, table);
    EXPECT_EQ(unseen.candidates[0].rank, 4u);
    EXPECT_TRUE(unseen.candidates[0].unseen);
    EXPECT_FALSE(unseen.candidates[1].unseen);

    auto abstain = rank_candidates({"du", "uu"}, table, UnseenPolicy::abstain);
    EXPECT_EQ(abstain.candidates[0].rank, std::nullopt);
    auto p = predict(abstain, 1.0);
    EXPECT_EQ(p.direction, Direction::abstain);
    EXPECT_EQ(p.reason, AbstainReason::unseen_word);
}

TEST(RankCandidates, BothUnseenAbstainsOnTie) {
    auto table = RankTable::from_counts({{"uu", 3}, {"ud", 1}});
    auto p = predict(rank_candidates({"dd", "du"}, table), 0.7);
    EXPECT_EQ(p.direction, Direction::abstain);
    EXPECT_EQ(p.reason, AbstainReason::tie);
    EXPECT_EQ(p.p_up, 0.5);
}

TEST(Predict, PowerLawProbabilities) {
    auto p = predict(two(2, 1), 1.0);
    EXPECT_NEAR(p.p_up, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(p.p_down, 1.0 / 3.0, 1e-15);
    EXPECT_EQ(p.direction, Direction::up);

    auto tie = predict(two(3, 3), 1.3);
    EXPECT_EQ(tie.p_up, 0.5);
    EXPECT_EQ(tie.direction, Direction::abstain);
    EXPECT_EQ(tie.reason, AbstainReason::tie);

    // Reference value from a 50-digit evaluation: 2^-0.4 / (2^-0.4 + 5^-0.4).
    auto q = predict(two(5, 2), 0.4);
    EXPECT_NEAR(q.p_up, 0.590616924501578, 1e-14);
    EXPECT_EQ(q.direction, Direction::up);
}

TEST(Predict, Errors) {
    EXPECT_THROW(predict(two(1, 2), -0.1), DomainError);
    EXPECT_THROW(predict(two(0, 2), 1.0), DomainError);
    EXPECT_THROW(predict(two(1, 2), std::nan("")), DomainError);
}

TEST(Predict, ProbabilitiesSumToOne) {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 20000; ++i) {
        auto ru = 1 + gen() % 64;
        auto rd = 1 + gen() % 64;
        double zeta = 3.0 * oracle::unit(gen);
        auto p = predict(two(rd, ru), zeta);
        EXPECT_NEAR(p.p_up + p.p_down, 1.0, 1e-12);
    }
}

TEST(Predict, MonotoneInUpRank) {
    for (double zeta : {0.05, 0.5, 1.0, 2.5}) {
        for (std::size_t rd = 1; rd <= 20; ++rd) {
            double prev = -1.0;
            for (std::size_t ru = 40; ru >= 1; --ru) {
                double p = predict(two(rd, ru), zeta).p_up;
                EXPECT_GT(p, prev);
                prev = p;
            }
        }
    }
}

TEST(Predict, ZeroExponentIsCoinFlip) {
    for (std::size_t ru = 1; ru <= 10; ++ru) {
        for (std::size_t rd = 1; rd <= 10; ++rd) {
            auto p = predict(two(rd, ru), 0.0);
            EXPECT_EQ(p.p_up, 0.5);
            EXPECT_EQ(p.direction, Direction::abstain);
        }
    }
}

TEST(Predict, TwoDayMarginal) {
    // Candidates for prefix "ud", m=4: uddd uddu udud uduu.
    auto table = RankTable::from_counts({{"uduu", 9}, {"uddd", 5}, {"udud", 3}, {"uddu", 1}});
    auto ranks = rank_candidates(candidate_words("ud", 4, 2), table);
    auto p = predict(ranks, 1.0, 2);
    // Weights by rank: uddd 1/2, uddu 1/4, udud 1/3, uduu 1.
    const double total = 0.5 + 0.25 + 1.0 / 3.0 + 1.0;
    ASSERT_EQ(p.day_p_up.size(), 2u);
    EXPECT_NEAR(p.day_p_up[0], (1.0 / 3.0 + 1.0) / total, 1e-15);
    EXPECT_NEAR(p.day_p_up[1], (0.25 + 1.0) / total, 1e-15);
    EXPECT_NEAR(p.p_up, (0.25 + 1.0) / total, 1e-15);
    EXPECT_EQ(p.direction, Direction::up);
}

TEST(StrategyConfig, Validation) {
    StrategyConfig c;
    EXPECT_NO_THROW(validate(c));
    c.horizon = 4;
    EXPECT_THROW(validate(c), InputError);
    c.horizon = 0;
    EXPECT_THROW(validate(c), InputError);
    c.horizon = 3;
    c.m = 3;
    EXPECT_THROW(validate(c), InputError);
    c.m = 6;
    c.w = 5;
    EXPECT_THROW(validate(c), InputError);
}

TEST(Walkforward, BoundaryLengths) {
    StrategyConfig c;
    c.m = 4;
    c.w = 40;
    auto text = make_sequence(oracle::markov_text(41, 0.7, 3));
    auto preds = run_walkforward(text, c);
    ASSERT_EQ(preds.size(), 1u);
    EXPECT_EQ(preds[0].target, 40u);
    auto short_text = make_sequence(oracle::markov_text(40, 0.7, 3));
    try {
        run_walkforward(short_text, c);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("at least 41"), std::string::npos) << e.what();
    }
    c.horizon = 2;
    EXPECT_THROW(run_walkforward(text, c), InputError);
    EXPECT_EQ(run_walkforward(make_sequence(oracle::markov_text(42, 0.7, 3)), c).size(), 1u);
}

TEST(Walkforward, PeriodicTextSliding) {
    StrategyConfig c;
    c.m = 2;
    c.w = 4;
    c.counting = CountingMode::sliding;
    std::string text;
    for (int i = 0; i < 10; ++i) text += "ud";
    auto preds = run_walkforward(make_sequence(text), c);
    ASSERT_EQ(preds.size(), 16u);
    // Window "udud": ud=2, du=1 so zeta=1; prefix d ranks du 2 and unseen dd 3.
    EXPECT_NEAR(preds[0].zeta, 1.0, 1e-12);
    EXPECT_NEAR(preds[0].p_up, 0.6, 1e-12);
    EXPECT_EQ(preds[0].direction, Direction::up);
    EXPECT_NEAR(preds[1].p_up, 0.4, 1e-12);
    EXPECT_EQ(preds[1].direction, Direction::down);
    for (const auto& p : preds) {
        EXPECT_EQ(p.direction, letter_direction(text[p.target], Alphabet::binary()));
    }
}

TEST(Walkforward, PeriodicTextBlockIsDegenerate) {
    StrategyConfig c;
    c.m = 2;
    c.w = 4;
    std::string text;
    for (int i = 0; i < 10; ++i) text += "ud";
    for (const auto& p : run_walkforward(make_sequence(text), c)) {
        EXPECT_EQ(p.direction, Direction::abstain);
        EXPECT_EQ(p.reason, AbstainReason::degenerate_window);
    }
}

TEST(Walkforward, IidAccuracyNearHalf) {
    StrategyConfig c;
    c.m = 6;
    c.w = 500;
    auto text = oracle::iid_text(3000, 20240501);
    auto preds = run_walkforward(make_sequence(text), c);
    std::size_t hits = 0;
    std::size_t calls = 0;
    for (const auto& p : preds) {
        if (p.direction == Direction::abstain) continue;
        ++calls;
        hits += p.direction == letter_direction(text[p.target], Alphabet::binary());
    }
    ASSERT_GE(calls, 2000u);
    EXPECT_NEAR(static_cast<double>(hits) / static_cast<double>(calls), 0.5, 0.03);
}

TEST(Walkforward, AbstainPolicyOnlyAddsAbstentions) {
    StrategyConfig c;
    c.m = 6;
    c.w = 100;
    auto text = make_sequence(oracle::iid_text(600, 8));
    auto ranked = run_walkforward(text, c);
    c.unseen = UnseenPolicy::abstain;
    auto strict = run_walkforward(text, c);
    ASSERT_EQ(ranked.size(), strict.size());
    std::size_t unseen = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (strict[i].reason == AbstainReason::unseen_word) {
            ++unseen;
            continue;
        }
        EXPECT_EQ(strict[i].direction, ranked[i].direction);
    }
    EXPECT_GT(unseen, 0u);
}

TEST(Walkforward, NoLookAhead) {
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 300; ++trial) {
        StrategyConfig c;
        c.m = 2 + gen() % 5;
        c.horizon = 1 + gen() % std::min<std::size_t>(3, c.m - 1);
        c.w = c.m + gen() % 60;
        c.counting = gen() % 2 ? CountingMode::block : CountingMode::sliding;
        c.zeta_source = gen() % 2 ? ZetaSource::real : ZetaSource::shuffled;
        c.seed = gen();
        const std::size_t n = c.w + c.horizon + 30;
        auto text = oracle::markov_text(n, 0.7, gen());
        auto base = run_walkforward(make_sequence(text), c);
        const std::size_t pos = c.w + gen() % (n - c.w);
        auto mutated = text;
        for (std::size_t i = pos; i < n; ++i) {
            if (gen() % 2) mutated[i] = mutated[i] == 'u' ? 'd' : 'u';
        }
        auto after = run_walkforward(make_sequence(mutated), c);
        for (std::size_t i = 0; i < base.size(); ++i) {
            // The window for target t ends before t - horizon + 1.
            if (base[i].target > pos + c.horizon - 1) break;
            EXPECT_EQ(base[i].p_up, after[i].p_up);
            EXPECT_EQ(base[i].direction, after[i].direction);
        }
    }
}

TEST(Walkforward, RelabelingFlipsDirection) {
    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        StrategyConfig c;
        c.m = 3;
        c.w = 200;
        c.counting = CountingMode::sliding;
        auto text = oracle::markov_text(400, 0.65, seed);
        auto mirrored = mirror(text, Alphabet::binary());
        auto a = run_walkforward(make_sequence(text), c);
        auto b = run_walkforward(make_sequence(mirrored), c);
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto window = std::string_view(text).substr(a[i].target - c.w, c.w);
            if (!tie_free(count_words(window, c.m, c.counting))) continue;
            ++compared;
            EXPECT_EQ(b[i].direction, flip(a[i].direction));
            EXPECT_NEAR(b[i].p_up, a[i].p_down, 1e-15);
        }
    }
    EXPECT_GT(compared, 200u);
}

TEST(Walkforward, ThreadCountDoesNotMatter) {
    StrategyConfig c;
    c.m = 5;
    c.w = 300;
    c.zeta_source = ZetaSource::shuffled;
    c.seed = 5;
    auto text = make_sequence(oracle::markov_text(900, 0.7, 1));
    c.threads = 1;
    auto a = run_walkforward(text, c);
    c.threads = 7;
    auto b = run_walkforward(text, c);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].p_up, b[i].p_up);
        EXPECT_EQ(a[i].zeta, b[i].zeta);
    }
}

TEST(Walkforward, DatesFollowSessionsWhenZerosDropped) {
    IncrementSeries inc;
    std::mt19937_64 gen(4);
    for (int i = 0; i < 120; ++i) {
        inc.values.push_back(Decimal::from_int(static_cast<std::int64_t>(gen() % 3) - 1));
        inc.dates.push_back(parse_date("2001-01-01"));
    }
    using namespace std::chrono;
    for (int i = 0; i < 120; ++i) inc.dates[i] = year_month_day{sys_days{year{2001} / January / 1} + days{i}};
    auto text = symbolize(inc, Alphabet::binary(ZeroPolicy::drop));
    StrategyConfig c;
    c.m = 3;
    c.w = 30;
    for (const auto& p : run_walkforward(text, c)) {
        ASSERT_TRUE(p.session && p.date);
        EXPECT_FALSE(inc.values[*p.session].is_zero());
        EXPECT_EQ(*p.date, inc.dates[*p.session]);
    }
}

TEST(ForecastNext, MatchesWalkforwardOnExtendedText) {
    StrategyConfig c;
    c.m = 4;
    c.w = 80;
    auto text = oracle::markov_text(200, 0.7, 6);
    auto next = forecast_next(make_sequence(text), c);
    EXPECT_EQ(next.target, 200u);
    EXPECT_FALSE(next.date.has_value());
    auto extended = run_walkforward(make_sequence(text + "u"), c);
    EXPECT_EQ(extended.back().p_up, next.p_up);
    EXPECT_EQ(extended.back().direction, next.direction);
}
