#pragma once

#include <stdexcept>
#include <string>

namespace ecamp {

// Base for every error the library raises deliberately.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input files are missing or their headers do not match the expected schema.
class IngestError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A model operation was called outside its precondition (e.g. a major with no graduates).
class ModelError : public Error {
public:
    using Error::Error;
};

// A cache or artifact file is absent, stale or unreadable.
class ArtifactError : public Error {
public:
    using Error::Error;
};

} // namespace ecamp
