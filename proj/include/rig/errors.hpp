#pragma once

#include <stdexcept>
#include <string>

namespace rig {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid metadata or node fields at construction time.
struct ConstructionError : Error {
    using Error::Error;
};

// Operation not allowed in the current graph state (e.g. add after finalize).
struct StateError : Error {
    using Error::Error;
};

// Identifier already used within the same collection.
struct DuplicateIdError : Error {
    using Error::Error;
};

// An identifier set references something that does not exist.
struct BrokenReferenceError : Error {
    using Error::Error;
};

// A document does not match the view schema.
struct SchemaError : Error {
    using Error::Error;
};

// Extraction pipeline failure; message carries the failing stage.
struct ExtractionError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct StoreError : Error {
    using Error::Error;
};

// Stored file uses an unsupported schema version.
struct VersionError : Error {
    using Error::Error;
};

// Query target does not resolve to any node.
struct NotFoundError : Error {
    using Error::Error;
};

// Query target resolves to more than one node.
struct AmbiguityError : Error {
    using Error::Error;
};

// Argument outside the function's domain.
struct DomainError : Error {
    using Error::Error;
};

} // namespace rig
