/* C interface to the inventory simulation library.
 *
 * Every function returns an invsim_status. On failure, invsim_last_error()
 * returns a message for the calling thread, valid until the next call on that
 * thread. Handles are opaque and must be released with their _free function.
 */
#ifndef INVSIM_H
#define INVSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(INVSIM_BUILDING_LIBRARY)
#    define INVSIM_API __declspec(dllexport)
#  else
#    define INVSIM_API __declspec(dllimport)
#  endif
#else
#  define INVSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum invsim_status {
    INVSIM_OK = 0,
    INVSIM_USAGE_ERROR = 1,    /* bad argument, option or command name */
    INVSIM_DATA_ERROR = 2,     /* invalid or unreadable input data */
    INVSIM_INTERNAL_ERROR = 3
} invsim_status;

typedef struct invsim_experiment invsim_experiment;
typedef struct invsim_report invsim_report;

INVSIM_API const char* invsim_version(void);
INVSIM_API const char* invsim_last_error(void);

/* Experiments: a parsed configuration with demand models resolved. */
INVSIM_API invsim_status invsim_experiment_load(const char* config_path, invsim_experiment** out);
/* `base_dir` resolves a relative history path; may be NULL for the cwd. */
INVSIM_API invsim_status invsim_experiment_parse(const char* config_text, const char* base_dir,
                                                 invsim_experiment** out);
INVSIM_API void invsim_experiment_free(invsim_experiment* exp);
INVSIM_API size_t invsim_experiment_product_count(const invsim_experiment* exp);
/* NULL when index is out of range. */
INVSIM_API const char* invsim_experiment_product_id(const invsim_experiment* exp, size_t index);

/* Commands. `names`/`values` are `count` option pairs; both may be NULL when
 * count is 0. */
INVSIM_API invsim_status invsim_run(const invsim_experiment* exp, const char* command,
                                    const char* const* names, const char* const* values,
                                    size_t count, invsim_report** out);
INVSIM_API invsim_status invsim_estimate(const char* history_path, invsim_report** out);

INVSIM_API const char* invsim_report_json(const invsim_report* rep);
INVSIM_API size_t invsim_report_artifact_count(const invsim_report* rep);
INVSIM_API const char* invsim_report_artifact_name(const invsim_report* rep, size_t index);
INVSIM_API const char* invsim_report_artifact_data(const invsim_report* rep, size_t index);
INVSIM_API void invsim_report_free(invsim_report* rep);

/* Single-run primitives. */
typedef struct invsim_product {
    double purchase_cost;
    double selling_price;
    double ordering_cost;
    double holding_rate;  /* annual, fraction of purchase cost */
    double size;
    int lead_time;
    int64_t starting_stock;
} invsim_product;

typedef enum invsim_policy_kind {
    INVSIM_PERIODIC_FIXED_Q = 0,
    INVSIM_PERIODIC_UP_TO = 1,
    INVSIM_CONTINUOUS_FIXED_Q = 2
} invsim_policy_kind;

typedef struct invsim_policy {
    invsim_policy_kind kind;
    int review_period;        /* periodic kinds */
    int64_t order_quantity;   /* fixed-quantity kinds */
    int64_t reorder_point;    /* continuous */
    int dynamic_quantity;     /* continuous: order max(Q, r - position) */
    double order_up_to;       /* periodic up-to target level */
    double safety_factor;     /* periodic up-to */
} invsim_policy;

typedef struct invsim_day {
    int day;
    int64_t demand;
    int64_t sold;
    int64_t lost;
    int64_t end_inventory;
    int64_t order_placed;  /* -1 when no order */
    int64_t arrival;       /* -1 when nothing arrived */
} invsim_day;

typedef struct invsim_costs {
    double revenue;
    double holding;
    double ordering;
    double purchase;
    double profit;
} invsim_costs;

/* Runs one horizon of `days` demands. `trace` may be NULL; otherwise it must
 * hold `days` entries. */
INVSIM_API invsim_status invsim_simulate_days(const invsim_product* product,
                                              const invsim_policy* policy, const int64_t* demand,
                                              size_t days, invsim_day* trace, invsim_costs* costs);

INVSIM_API invsim_status invsim_estimate_stats(const int64_t* demand, size_t days,
                                               double* demand_probability, double* mean_daily,
                                               double* std_daily);

INVSIM_API invsim_status invsim_lead_time_demand(double demand_probability, double mean_daily,
                                                 double std_daily, int lead_time,
                                                 double* expected, double* std_dev);

#ifdef __cplusplus
}
#endif

#endif
