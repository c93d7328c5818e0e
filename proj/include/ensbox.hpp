#pragma once

#include "ensbox/behavior.hpp"
#include "ensbox/boxgen.hpp"
#include "ensbox/comm.hpp"
#include "ensbox/double_description.hpp"
#include "ensbox/enumeration.hpp"
#include "ensbox/errors.hpp"
#include "ensbox/export.hpp"
#include "ensbox/extremality.hpp"
#include "ensbox/io.hpp"
#include "ensbox/linalg.hpp"
#include "ensbox/lo.hpp"
#include "ensbox/membership.hpp"
#include "ensbox/ns_space.hpp"
#include "ensbox/rational.hpp"
#include "ensbox/relabeling.hpp"
#include "ensbox/simplex.hpp"
