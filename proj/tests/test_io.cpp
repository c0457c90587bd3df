#include "sas/generators.hpp"
#include "sas/io.hpp"

#include <doctest.h>

using namespace sas;

namespace {

ErrorCode parse_code(const std::string& text) {
    try {
        (void)parse_instance(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse error");
    return ErrorCode::NotConverged;
}

const char* kTwoState = R"({
  "n_states": 2, "n_actions": 2, "discount": 0.9,
  "rewards": [[0.5, 0.5], [1.0, 0.0]],
  "transitions": [[[1, 0], [0, 1]], [[1, 0], [1, 0]]],
  "availability": {"kind": "pda", "rho": [[1, 1], [0.2, 1]]},
  "state_names": ["s1", "s2"],
  "action_names": [["Stay", "Go"], ["Up", "Down"]]
})";

} // namespace

TEST_CASE("hand-written file matches the generator") {
    const InstanceDocument doc = parse_instance(kTwoState);
    CHECK(doc == two_state_document(0.2, 0.9));
    CHECK(format_order(doc, 0, std::vector<ActionIndex>{0, 1}) == "[Stay, Go]");
    CHECK(state_name(doc, 1) == "s2");
}

TEST_CASE("round trip for every availability kind") {
    for (auto kind : {AvailabilityKind::Pda, AvailabilityKind::Explicit, AvailabilityKind::Sampler}) {
        const InstanceDocument doc = two_state_document(0.3, 0.95, kind, 17);
        CHECK(parse_instance(serialize_instance(doc)) == doc);
        RandomInstanceSpec spec;
        spec.kind = kind;
        spec.n_states = 4;
        spec.n_actions = 3;
        spec.seed = 8;
        const InstanceDocument random = to_document(random_instance(spec));
        const InstanceDocument back = parse_instance(serialize_instance(random));
        CHECK(back == random);
        CHECK(serialize_instance(back) == serialize_instance(random));
    }
}

TEST_CASE("shared action names") {
    std::string text = kTwoState;
    text.replace(text.find("[[\"Stay\""), std::string(R"([["Stay", "Go"], ["Up", "Down"]])").size(),
                 R"(["left", "right"])");
    const InstanceDocument doc = parse_instance(text);
    CHECK(action_name(doc, 1, 1) == "right");
    CHECK(parse_instance(serialize_instance(doc)) == doc);
}

TEST_CASE("malformed documents") {
    CHECK(parse_code("{") == ErrorCode::ParseError);
    CHECK(parse_code("{}") == ErrorCode::ParseError);
    std::string short_rewards = kTwoState;
    short_rewards.replace(short_rewards.find("[[0.5, 0.5], [1.0, 0.0]]"), 24, "[[0.5, 0.5]]");
    CHECK(parse_code(short_rewards) == ErrorCode::DimensionMismatch);
    std::string bad_kind = kTwoState;
    bad_kind.replace(bad_kind.find("\"pda\""), 5, "\"gaussian\"");
    CHECK(parse_code(bad_kind) == ErrorCode::ParseError);
    std::string text_number = kTwoState;
    text_number.replace(text_number.find("0.9,"), 3, "\"x\"");
    CHECK(parse_code(text_number) == ErrorCode::ParseError);
}

TEST_CASE("parsing does not validate, validate does") {
    std::string leaky = kTwoState;
    leaky.replace(leaky.find("[[1, 0], [0, 1]]"), 16, "[[0.9, 0], [0, 1]]");
    const InstanceDocument doc = parse_instance(leaky);
    CHECK_THROWS_AS((void)validate(doc.mdp, doc.availability), ValidationError);
}
