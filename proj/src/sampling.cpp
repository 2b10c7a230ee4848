#include "mevni/sampling.hpp"

#include <json.hpp>

namespace mevni {

namespace {

using json = nlohmann::ordered_json;

class Sampler {
public:
    Sampler(std::mt19937_64& rng, const MicroOptions& opts) : rng_(rng), opts_(opts), left_(opts.max_units) {}

    MicroSample draw() {
        int ntok = pick(2, 3);
        for (int i = 0; i < ntok; ++i) tokens_.push_back("T" + std::to_string(i));
        for (const auto& t : tokens_) lines_.push_back({{"token", t}, {"price", pick(1, 3)}});

        int groups = pick(2, std::max(2, opts_.max_contracts));
        for (int g = 0; g < groups && left_ > 0; ++g) {
            std::size_t before = deploys_.size();
            for (int tries = 0; tries < 8 && deploys_.size() == before; ++tries) group(pick(0, 11));
            if (deploys_.size() > before) bounds_.push_back(deploys_.size());
        }
        if (deploys_.empty()) group(1);
        if (bounds_.empty()) bounds_.push_back(deploys_.size());

        json wallet = json::object();
        for (int i = pick(0, std::min(3, left_)); i > 0; --i) {
            std::string t = token();
            wallet[t] = wallet.value(t, 0) + 1;
            --left_;
        }
        lines_.push_back({{"user", "M"}, {"wallet", wallet}, {"adversary", true}});

        std::size_t split = bounds_.size() > 1 ? bounds_[pick(0, static_cast<int>(bounds_.size()) - 2)] : 0;
        for (std::size_t i = 0; i < deploys_.size(); ++i) {
            if (i == split && split > 0) lines_.push_back({{"split", true}});
            lines_.push_back(deploys_[i]);
        }

        std::string text;
        for (const auto& l : lines_) text += l.dump() + "\n";
        Scenario sc = parse_scenario(text, "micro");
        SearchBudget b;
        b.exhaustive = true;
        b.ceiling = sc.state.total_units();
        json bj = {{"exhaustive", true}, {"ceiling", sc.state.total_units().convert_to<long long>()}};
        text += json{{"budget", bj}}.dump() + "\n";
        sc.budget = b;
        return {text, std::move(sc)};
    }

private:
    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    const std::string& token() { return tokens_[pick(0, static_cast<int>(tokens_.size()) - 1)]; }
    std::string other(const std::string& t) {
        std::string u;
        do u = token();
        while (u == t);
        return u;
    }
    std::string fresh(const std::string& kind) { return kind + std::to_string(++counter_); }

    // Reserves up to `hi` units, or nothing when fewer than `lo` are left.
    int take(int lo, int hi) {
        if (left_ < lo) return -1;
        int x = pick(lo, std::min(hi, left_));
        left_ -= x;
        return x;
    }

    void deploy(const std::string& kind, const std::string& name, json args, json fund = json::object()) {
        json d = {{"deploy", kind}, {"name", name}};
        if (!args.empty()) d["args"] = std::move(args);
        if (!fund.empty()) d["fund"] = std::move(fund);
        deploys_.push_back(std::move(d));
    }

    std::string amm(const std::string& t0, const std::string& t1, int max_reserve) {
        if (left_ < 2) return "";
        int r0 = take(1, max_reserve);
        int r1 = take(1, max_reserve);
        if (r1 < 0) {
            left_ += r0;
            return "";
        }
        std::string n = fresh("AMM");
        deploy("amm", n, {{"t0", t0}, {"t1", t1}}, {{t0, r0}, {t1, r1}});
        amms_.push_back({n, t0, t1});
        return n;
    }

    void group(int kind) {
        switch (kind) {
            case 0: {
                std::string t0 = token();
                amm(t0, other(t0), 3);
                break;
            }
            case 1: {
                int x = take(1, 3);
                if (x > 0) {
                    std::string t = token();
                    deploy("airdrop", fresh("Drop"), {{"token", t}}, {{t, x}});
                }
                break;
            }
            case 2: {
                int x = take(1, 3);
                if (x > 0) {
                    std::string out = token();
                    deploy("exchange", fresh("Ex"), {{"tout", out}, {"tin", other(out)}, {"rate", pick(1, 2)}}, {{out, x}});
                }
                break;
            }
            case 3: {
                std::string out = token();
                json args = {{"out_token", out}, {"out_amount", pick(1, 2)}};
                if (pick(0, 1)) {
                    args["in_token"] = other(out);
                    args["in_amount"] = 1;
                }
                int x = take(0, 3);
                std::string n = fresh("Fix");
                deploy("fixed_swap", n, args, x > 0 ? json{{out, x}} : json::object());
                fixed_.push_back({n, out});
                break;
            }
            case 4: {
                if (fixed_.empty()) return;
                const auto& [src, t] = fixed_[pick(0, static_cast<int>(fixed_.size()) - 1)];
                deploy("relay", fresh("Relay"), {{"source", src}, {"token", t}, {"amount", pick(1, 2)}});
                break;
            }
            case 5: {
                int amount = pick(1, 2);
                if (left_ < amount) return;
                left_ -= amount;
                std::string t = token();
                std::string reg = fresh("Reg");
                deploy("register", reg, json::object());
                deploy("register_gate", fresh("Gate"), {{"reg", reg}, {"token", t}, {"amount", amount}, {"expected", pick(1, 2)}},
                       {{t, amount}});
                break;
            }
            case 6:
                deploy("paid_flag", fresh("Flag"), {{"token", token()}});
                break;
            case 7: {
                if (left_ < 2) return;
                left_ -= 2;
                std::string t = token();
                std::string latch = fresh("Latch");
                deploy("latch", latch, {{"token", t}}, {{t, 1}});
                deploy("latch_claim", fresh("Claim"), {{"latch", latch}, {"token", t}}, {{t, 1}});
                break;
            }
            case 8: {
                if (left_ < 3) return;
                left_ -= 3;
                std::string t = token();
                std::string var = fresh("Var");
                deploy("once_register", var, json::object());
                deploy("drop", fresh("Drop"), {{"var", var}, {"token", t}}, {{t, 3}});
                break;
            }
            case 9: {
                if (!opts_.allow_height || amms_.empty() || left_ < 1) return;
                const Amm& a = amms_[pick(0, static_cast<int>(amms_.size()) - 1)];
                left_ -= 1;
                deploy("bet", fresh("Bet"),
                       {{"oracle", a.name}, {"token", a.t1}, {"rate", "1"}, {"deadline", pick(1, 3)}, {"eth", a.t0}},
                       {{a.t0, 1}});
                break;
            }
            case 10: {
                if (left_ < 4) return;
                std::string t0 = token(), t1 = other(t0);
                std::string a = amm(t0, t1, 2);
                std::string b = amm(t0, t1, 2);
                if (a.empty() || b.empty()) return;
                deploy("best_swap", fresh("Best"), {{"c0", a}, {"c1", b}});
                break;
            }
            case 11: {
                if (tokens_.size() < 3 || left_ < 4) return;
                std::string a = amm(tokens_[0], tokens_[1], 2);
                std::string b = amm(tokens_[1], tokens_[2], 2);
                if (a.empty() || b.empty()) return;
                deploy("swap_router", fresh("Router"), {{"c0", a}, {"c1", b}});
                break;
            }
        }
    }

    struct Amm {
        std::string name, t0, t1;
    };

    std::mt19937_64& rng_;
    MicroOptions opts_;
    int left_;
    int counter_ = 0;
    std::vector<std::string> tokens_;
    std::vector<json> lines_;
    std::vector<json> deploys_;
    std::vector<std::size_t> bounds_;
    std::vector<Amm> amms_;
    std::vector<std::pair<std::string, std::string>> fixed_;
};

}  // namespace

MicroSample random_micro_scenario(std::mt19937_64& rng, const MicroOptions& opts) { return Sampler(rng, opts).draw(); }

}  // namespace mevni
