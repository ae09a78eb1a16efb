import math

from rest_framework import serializers

from .exceptions import DomainError
from .models import CellShape, Metric, parse_variant
from .pneumatics import PneumaticConfig
from .stats import Pooling


class FiniteFloatField(serializers.FloatField):
    default_error_messages = {
        'non_finite': 'A finite number is required.',
    }

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if not math.isfinite(value):
            self.fail('non_finite')
        return value


class PositiveFloatField(FiniteFloatField):
    default_error_messages = {
        'not_positive': 'Ensure this value is greater than 0.',
    }

    def to_internal_value(self, data):
        value = super().to_internal_value(data)
        if value <= 0:
            self.fail('not_positive')
        return value


class ShapeField(serializers.ChoiceField):
    """Accepts ``square`` as well as ``Square``."""

    def __init__(self, **kwargs):
        super().__init__(choices=CellShape.choices, **kwargs)

    def to_internal_value(self, data):
        return CellShape(super().to_internal_value(str(data).strip().lower()))


class VariantListField(serializers.CharField):
    """``square,3,8; circle,4,12`` as a tuple of ActuatorSpec."""

    def to_internal_value(self, data):
        text = super().to_internal_value(data)
        try:
            return tuple(parse_variant(item) for item in text.split(';') if item.strip())
        except DomainError as exc:
            raise serializers.ValidationError(str(exc))


class DisplacementRowSerializer(serializers.Serializer):
    shape = ShapeField()
    p_cm = PositiveFloatField()
    delta_cm = PositiveFloatField()


class ElongationRowSerializer(serializers.Serializer):
    shape = ShapeField()
    p_cm = PositiveFloatField()
    n = serializers.IntegerField(min_value=1)
    elongation_cm = FiniteFloatField(min_value=0)


class FixtureRowSerializer(serializers.Serializer):
    metric = serializers.ChoiceField(choices=Metric.choices)
    shape = ShapeField()
    p_cm = PositiveFloatField()
    n = serializers.IntegerField(min_value=1)
    mean = FiniteFloatField()
    sd = FiniteFloatField(min_value=0)

    def validate_metric(self, value):
        return Metric(value)


class TrialMetricsRowSerializer(serializers.Serializer):
    shape = ShapeField()
    p_cm = PositiveFloatField()
    n = serializers.IntegerField(min_value=1)
    trial = serializers.IntegerField(min_value=0)
    path_cm = FiniteFloatField(min_value=0)
    si = FiniteFloatField(min_value=1)
    jerk_ms3 = FiniteFloatField(min_value=0)
    angle_deg = FiniteFloatField(min_value=0, max_value=180)


class PneumaticConfigSerializer(serializers.Serializer):
    steady_pressure_kpa = PositiveFloatField()
    supply_flow_cm3_s = PositiveFloatField()
    resistance_square = PositiveFloatField()
    resistance_rectangle = PositiveFloatField()
    resistance_circle = PositiveFloatField()
    completion_fraction = FiniteFloatField()
    window_s = PositiveFloatField()

    def validate_completion_fraction(self, value):
        if not 0.0 < value < 1.0:
            raise serializers.ValidationError('Must lie strictly between 0 and 1.')
        return value

    def create(self, validated_data):
        return PneumaticConfig(
            steady_pressure_kpa=validated_data['steady_pressure_kpa'],
            supply_flow=validated_data['supply_flow_cm3_s'],
            shape_resistance={
                CellShape.SQUARE: validated_data['resistance_square'],
                CellShape.RECTANGLE: validated_data['resistance_rectangle'],
                CellShape.CIRCLE: validated_data['resistance_circle'],
            },
            completion_fraction=validated_data['completion_fraction'],
            window_s=validated_data['window_s'],
        )


class ExperimentConfigSerializer(serializers.Serializer):
    ELONGATION_SOURCES = ('measured', 'estimated')

    variants = VariantListField(required=False, allow_blank=True)
    trials = serializers.IntegerField(min_value=1, default=10)
    phase_s = PositiveFloatField(default=5.0)
    seed = serializers.IntegerField(min_value=0, default=0)
    sigma_pos_cm = FiniteFloatField(min_value=0, default=1e-4)
    sigma_acc = FiniteFloatField(min_value=0, default=0.02)
    elongation_jitter = FiniteFloatField(min_value=0, max_value=0.5, default=0.03)
    elongation_source = serializers.ChoiceField(choices=ELONGATION_SOURCES, default='measured')
    transmission = FiniteFloatField(default=0.3)
    pooling = serializers.ChoiceField(choices=Pooling.choices, default=Pooling.TRIALS)
    pneumatics = serializers.CharField(required=False, allow_blank=True)
    out_dir = serializers.CharField(required=False, allow_blank=True)
    upper_arm_cm = PositiveFloatField(required=False)
    forearm_cm = PositiveFloatField(required=False)
    forearm_mass_kg = PositiveFloatField(required=False)
    passive_rom_deg = PositiveFloatField(required=False)
    attach_d_cm = PositiveFloatField(required=False)

    def validate_transmission(self, value):
        if not 0.0 < value <= 1.0:
            raise serializers.ValidationError('Must lie in (0, 1].')
        return value


def first_error(errors):
    """(field, message) of the first validation failure."""
    field, messages = next(iter(errors.items()))
    if isinstance(messages, dict):
        return first_error(messages)
    return field, str(messages[0])
