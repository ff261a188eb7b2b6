#pragma once

#include <vector>

namespace drs {

// Identity of one virtual user: the index-th sub-stream of real user `owner`.
// Both fields are 1-based, matching the usual "ik" notation (e.g. 21 = user 2,
// virtual user 1).
struct UserRef {
    int owner = 0;
    int index = 0;

    friend bool operator==(const UserRef&, const UserRef&) = default;
};

// Decode order emitted by the successive-decoding schedulers. The first M
// entries are always the index-1 virtual users, which are decodable in any
// order (or in parallel); the remaining entries are strictly sequential.
struct DecodingSchedule {
    std::vector<UserRef> order;
};

}  // namespace drs
