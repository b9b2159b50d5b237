#pragma once

#include <stdexcept>
#include <string>

namespace fnd {

// Bad input: data files, labels, corpus contents, experiment configs.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed experiment configuration file.
class ConfigError : public DataError {
public:
    using DataError::DataError;
};

// Training diverged or could not run.
class TrainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Model archive problems. Subclasses keep the failure kinds distinct.
class ArchiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ArchiveVersionError : public ArchiveError {
public:
    using ArchiveError::ArchiveError;
};

class ArchiveTruncatedError : public ArchiveError {
public:
    using ArchiveError::ArchiveError;
};

class ArchiveChecksumError : public ArchiveError {
public:
    using ArchiveError::ArchiveError;
};

}  // namespace fnd
