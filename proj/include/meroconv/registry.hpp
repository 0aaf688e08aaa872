#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "meroconv/classify.hpp"
#include "meroconv/family.hpp"

namespace mero {

/// Built-in example registry: every entry constructs cleanly and passes its
/// module invariants. Families carry their default classification config.
struct ExampleRegistryEntry {
    std::string name;
    std::string note;                         // what the example is, mathematically
    std::function<MapFamily()> family;        // null when the entry is a single map
    std::function<HomogRep(int)> map;         // parameter d used by deg-d only
    std::function<ClassifyConfig()> config;   // defaults for classify
    std::string expected_verdict;             // golden classification outcome
};

const std::vector<ExampleRegistryEntry>& example_registry();
const ExampleRegistryEntry* find_example(const std::string& name);

/// The paper-scale maps, also used directly by tests and the CLI.
HomogRep deg2_map();                 // [z0^2 z1 : z1^3 : z0^2 z2]
HomogRep degd_map(int d);            // [z0^d z1 : z1^(d+1) : z0^d z2]
HomogRep cremona_map();              // [z1 z2 : z0 z2 : z0 z1]
HomogRep deg2_iterate_closed_form(int k);

}  // namespace mero
