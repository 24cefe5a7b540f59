#include <catch2/catch_amalgamated.hpp>

#include "ops/generator.hpp"
#include "ops/instance.hpp"
#include "ops/instance_io.hpp"
#include "support/worked_example.hpp"

using namespace ops;

namespace {

const char* kMinimalInstance = R"({
  "n": 1, "m": 1,
  "operations": [
    { "id": 1, "job": 1, "machines": [{"k": 1, "p": 5}], "release": 0,
      "theta": {"num": 1, "den": 1} }
  ],
  "arcs": []
})";

}  // namespace

TEST_CASE("minimal instance parses") {
    const Instance inst = parse_instance(kMinimalInstance);
    CHECK(inst.num_ops() == 1);
    CHECK(inst.op(1).processing_on(1) == 5);
    CHECK(validate_instance(inst).ok());
}

TEST_CASE("syntax and structural errors carry a path") {
    CHECK_THROWS_AS(parse_instance("{"), ParseError);
    CHECK_THROWS_WITH(parse_instance(R"({"n": 1})"), Catch::Matchers::ContainsSubstring("m"));
    CHECK_THROWS_WITH(parse_instance(R"({"n":1,"m":1,"operations":[{"id":1,"job":1}]})"),
                      Catch::Matchers::ContainsSubstring("machines"));
}

TEST_CASE("fixed op with a non-fixed predecessor is rejected") {
    const std::string text = R"({
      "n": 1, "m": 2,
      "operations": [
        { "id": 1, "job": 1, "machines": [{"k": 1, "p": 2}, {"k": 2, "p": 3}] },
        { "id": 2, "job": 1, "machines": [{"k": 2, "p": 4}] }
      ],
      "arcs": [[1, 2]],
      "fixed": [{ "op": 2, "machine": 2, "start": 0 }]
    })";
    CHECK_THROWS_WITH(parse_instance(text),
                      Catch::Matchers::ContainsSubstring("fixed-predecessor closure"));
}

TEST_CASE("validation reports every violated invariant") {
    Instance inst;
    inst.num_jobs = 1;
    inst.num_machines = 1;
    inst.operations.push_back({});
    OperationSpec op;
    op.id = 1;
    op.job = 1;
    op.machines = {{1, 3}};
    inst.operations.push_back(op);
    inst.dag = PrecedenceDag(1, {});
    inst.calendars.assign(2, {});

    SECTION("valid instance gives an empty report") {
        CHECK(validate_instance(inst).ok());
    }
    SECTION("cycle") {
        OperationSpec op2 = op;
        op2.id = 2;
        inst.operations.push_back(op2);
        inst.dag = PrecedenceDag(2, {{1, 2}, {2, 1}});
        const auto report = validate_instance(inst);
        REQUIRE_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations) found = found || v.find("acyclicity") != std::string::npos;
        CHECK(found);
    }
    SECTION("calendar overlap") {
        inst.calendars[1] = {{0, 5}, {3, 8}};  // deliberately not normalized
        const auto report = validate_instance(inst);
        REQUIRE_FALSE(report.ok());
        bool found = false;
        for (const auto& v : report.violations)
            found = found || v.find("disjointness") != std::string::npos;
        CHECK(found);
    }
    SECTION("bad theta") {
        inst.operations[1].theta = Rational(0, 1);
        CHECK_FALSE(validate_instance(inst).ok());
    }
}

TEST_CASE("has_path on the worked-example precedence graph") {
    const Instance inst = ops::test::worked_example_instance();
    CHECK(has_path(inst.dag, 2, 9));   // 2 -> 5 -> 7 -> 9
    CHECK_FALSE(has_path(inst.dag, 9, 2));
    CHECK_FALSE(has_path(inst.dag, 2, 2));
    CHECK(has_path(inst.dag, 1, 9));
    CHECK_FALSE(has_path(inst.dag, 10, 13));
}

TEST_CASE("reachability is a strict partial order (vs transitive closure)") {
    RngStream rng(31337, 0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto n = static_cast<OpId>(rng.next_int(2, 20));
        std::vector<std::pair<OpId, OpId>> arcs;
        for (OpId a = 1; a <= n; ++a)
            for (OpId b = a + 1; b <= n; ++b)
                if (rng.next_int(0, 4) == 0) arcs.emplace_back(a, b);
        const PrecedenceDag dag(n, arcs);

        // Brute-force closure by repeated relaxation.
        std::vector<std::vector<char>> closure(n + 1, std::vector<char>(n + 1, 0));
        for (const auto& [a, b] : arcs) closure[a][b] = 1;
        for (bool changed = true; changed;) {
            changed = false;
            for (OpId a = 1; a <= n; ++a)
                for (OpId b = 1; b <= n; ++b)
                    if (closure[a][b])
                        for (OpId c = 1; c <= n; ++c)
                            if (closure[b][c] && !closure[a][c]) {
                                closure[a][c] = 1;
                                changed = true;
                            }
        }
        for (OpId a = 1; a <= n; ++a) {
            CHECK_FALSE(dag.has_path(a, a));  // irreflexive
            for (OpId b = 1; b <= n; ++b)
                CHECK(dag.has_path(a, b) == static_cast<bool>(closure[a][b]));
        }
    }
}

TEST_CASE("serialize-parse round trip on generated instances") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GeneratorParams params{2, 1, 3, 1, 3, 2, seed};
        const Instance inst = generate_instance(params);
        const std::string text = serialize_instance(inst);
        const Instance back = parse_instance(text);
        CHECK(serialize_instance(back) == text);
        CHECK(back.num_ops() == inst.num_ops());
        CHECK(back.num_machines == inst.num_machines);
    }
}
