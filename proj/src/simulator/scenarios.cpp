#include <algorithm>

#include "mqr/simulator.hpp"

namespace mqr {

namespace {

Hypothesis h(std::string_view s) { return Hypothesis::parse(s); }

IntentSpec plain(std::string name, std::string_view hyp, double popularity = 1.0) {
    IntentSpec in;
    in.name = std::move(name);
    in.popularity = popularity;
    in.correct = {h(hyp)};
    return in;
}

void add_background(WorldModel& w) {
    w.intents.push_back(plain("weather", "Weather|GetWeatherIntent|City:seattle"));
    w.intents.push_back(plain("timer", "Notifications|SetTimerIntent|Duration:ten minutes"));
    w.intents.push_back(plain("lights", "Home|TurnOnIntent|Device:lights"));
    w.intents.push_back(plain("shake", "Music|PlayMusicIntent|SongName:shake it off"));
}

}  // namespace

WorldModel scenario_type2() {
    WorldModel w;
    IntentSpec team;
    team.name = "team";
    team.popularity = 1.5;
    team.correct = {h("Music|PlayMusicIntent|SongName:team"), h("Music|PlayMusicIntent|ArtistName:lorde|SongName:team")};
    team.misrecognitions = {{h("Music|PlayMusicIntent|SongName:theme"), 0.8}};
    w.intents.push_back(std::move(team));
    add_background(w);
    return w;
}

WorldModel scenario_type1() {
    WorldModel w;
    IntentSpec ladadee;
    ladadee.name = "la da dee";
    ladadee.correct = {h("Music|PlayMusicIntent|SongName:la da dee"),
                       h("Music|PlayMusicIntent|ArtistName:cody simpson|SongName:la da dee")};
    ladadee.rephrases = {ladadee.correct[1]};
    w.intents.push_back(std::move(ladadee));
    w.intents.push_back(plain("lady", "Music|PlayMusicIntent|SongName:lady", 3.0));
    add_background(w);
    w.external.push_back({h("Music|PlayMusicIntent|SongName:la da dee"), h("Music|PlayMusicIntent|SongName:lady"), 1,
                          5, 1.0});
    return w;
}

WorldModel benchmark_world(std::uint64_t seed, std::size_t intents) {
    SimRng rng(splitmix64(seed));
    WorldModel w;
    w.customers = 100;
    auto base = [](std::size_t k) {
        return Hypothesis("D" + std::to_string(k % 6), "Intent" + std::to_string(k), {{"Item", "item" + std::to_string(k)}});
    };
    for (std::size_t k = 0; k < intents; ++k) {
        IntentSpec in;
        in.name = "intent" + std::to_string(k);
        in.popularity = 0.5 + 1.5 * rng.uniform();
        const Hypothesis c0 = base(k);
        const Hypothesis variant(c0.domain(), c0.intent(),
                                 {{"Item", "item" + std::to_string(k)}, {"Qual", "q" + std::to_string(k)}});
        in.correct = {c0, variant};
        switch (k % 5) {
            case 0:
            case 1: {
                // Misheard opening request, e.g. "theme" for "team".
                const Hypothesis misheard(c0.domain(), c0.intent(), {{"Item", "item" + std::to_string(k) + "x"}});
                in.misrecognitions = {{misheard, 0.3 + 0.6 * rng.uniform()}};
                in.p_rephrase_defect = 0.45 + 0.4 * rng.uniform();
                in.p_switch = std::min(0.4, 1.0 - in.p_rephrase_defect) * rng.uniform();
                if (k % 2) in.rephrases = {c0};
                break;
            }
            case 2:
                // Correct request rewritten elsewhere to a popular neighbour.
                in.rephrases = {variant};
                w.external.push_back({c0, base((k + 1) % intents), 1, 5, 0.5 + 0.5 * rng.uniform()});
                break;
            default:
                in.p_switch = 0.2 * rng.uniform();
                break;
        }
        w.intents.push_back(std::move(in));
    }
    return w;
}

}  // namespace mqr
