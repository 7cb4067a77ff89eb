#pragma once

#include <stdexcept>
#include <string>

namespace pnet {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unknown entity id in a lookup.
struct LookupError : Error {
    using Error::Error;
};

// (origin, link, dest) does not form a traversable edge.
struct TopologyError : Error {
    using Error::Error;
};

// An operation was invoked outside its stated precondition.
struct ContractError : Error {
    using Error::Error;
};

// Out-of-bounds or inconsistent configuration values.
struct ConfigError : Error {
    using Error::Error;
};

// Scenario parsing / schema problems; the message carries the location.
struct ScenarioError : Error {
    using Error::Error;
};

// Two networks expected to share structure do not.
struct StructureError : Error {
    using Error::Error;
};

}  // namespace pnet
