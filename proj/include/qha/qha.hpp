#pragma once

#include "qha/errors.hpp"
#include "qha/linalg.hpp"
#include "qha/core_groups.hpp"
#include "qha/hilbert_op.hpp"
#include "qha/weyl_system.hpp"
#include "qha/random.hpp"
#include "qha/qha_conv.hpp"
#include "qha/wiener_regularity.hpp"
#include "qha/decay_profile.hpp"
#include "qha/zsequence.hpp"
#include "qha/asymptotics.hpp"
#include "qha/uniform_tauberian.hpp"
#include "qha/csv.hpp"
