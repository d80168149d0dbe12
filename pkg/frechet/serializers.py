from fractions import Fraction

from rest_framework import serializers

from .choices import DependenceClass, Modularity
from .core import BernoulliPmf, margins, parse_rational, format_rational
from .exceptions import FrechetError
from .models import SweepRecord

PMF_ORDER = "revlex"


# ----------------------
# FIELDS
# ----------------------
class RationalField(serializers.Field):
    """Exact rational carried as a canonical 'num/den' string."""
    default_error_messages = {
        "invalid": "'{value}' is not a canonical 'num/den' rational.",
    }

    def to_representation(self, value):
        return format_rational(Fraction(value))

    def to_internal_value(self, data):
        try:
            return parse_rational(data)
        except FrechetError:
            self.fail("invalid", value=data)


def _messages(exc: FrechetError):
    return list(exc.messages)


# ----------------------
# PMF DOCUMENTS
# ----------------------
class PmfSerializer(serializers.Serializer):
    """
    Pmf file format: {"d": int, "p": "s/t", "order": "revlex", "values": [...]}.

    Reading yields a validated ``BernoulliPmf`` under ``validated_data["pmf"]``.
    "p" may be omitted or null; when given it must equal the common margin.
    """
    d = serializers.IntegerField(min_value=2, max_value=4)
    p = RationalField(required=False, allow_null=True)
    order = serializers.ChoiceField(choices=[PMF_ORDER], default=PMF_ORDER)
    values = serializers.ListField(child=RationalField(), allow_empty=False)

    def validate(self, data):
        try:
            data["pmf"] = BernoulliPmf(data["d"], tuple(data["values"]))
        except FrechetError as e:
            raise serializers.ValidationError({"values": _messages(e)})
        declared = data.get("p")
        common = set(margins(data["pmf"]))
        # unequal margins are left to the class-membership checks
        if declared is not None and len(common) == 1 and declared not in common:
            raise serializers.ValidationError({
                "p": f"Declared p = {format_rational(declared)} but the margins are {format_rational(common.pop())}."
            })
        return data

    def to_representation(self, instance: BernoulliPmf):
        common = set(margins(instance))
        return {
            "d": instance.d,
            "p": format_rational(common.pop()) if len(common) == 1 else None,
            "order": PMF_ORDER,
            "values": [format_rational(v) for v in instance.values],
        }


class ExtremalSetSerializer(serializers.Serializer):
    """{"p": "s/t", "d": int, "vertices": [pmf documents], "tags": [...], "labels": [...]}"""
    p = RationalField()
    d = serializers.IntegerField(min_value=2, max_value=4)
    vertices = PmfSerializer(many=True)
    tags = serializers.ListField(child=serializers.CharField())
    labels = serializers.ListField(child=serializers.CharField(), required=False)

    def validate(self, data):
        if len(data["tags"]) != len(data["vertices"]):
            raise serializers.ValidationError({"tags": "Expected one tag per vertex."})
        if any(v["d"] != data["d"] for v in data["vertices"]):
            raise serializers.ValidationError({"vertices": "Every vertex must have the set's dimension."})
        labels = data.get("labels") or [f"v{k}" for k in range(1, len(data["vertices"]) + 1)]
        if len(labels) != len(data["vertices"]):
            raise serializers.ValidationError({"labels": "Expected one label per vertex."})
        data["labels"] = labels
        return data

    def to_representation(self, instance):
        return {
            "p": format_rational(instance.p),
            "d": instance.d,
            "vertices": [PmfSerializer(v).data for v in instance.vertices],
            "tags": list(instance.tags),
            "labels": list(instance.labels),
        }


# ----------------------
# REPORTS
# ----------------------
class CorrelationProfileSerializer(serializers.Serializer):
    pairwise = serializers.ListField(child=serializers.ListField(child=RationalField()))
    classification = serializers.ChoiceField(choices=DependenceClass.choices)


class AllocationSerializer(serializers.Serializer):
    """Per-player Shapley values, the grand-coalition variance and the modularity label."""
    phis = serializers.ListField(child=RationalField())
    grand_value = RationalField()
    modularity = serializers.ChoiceField(choices=Modularity.choices)

    def validate(self, data):
        if sum(data["phis"], Fraction(0)) != data["grand_value"]:
            raise serializers.ValidationError("Shapley values must sum to the grand-coalition value.")
        return data


class SweepRecordSerializer(serializers.ModelSerializer):
    p = RationalField()
    nr = serializers.IntegerField(source="vertex_count", read_only=True)

    class Meta:
        model = SweepRecord
        fields = ['s', 't', 'p', 'd', 'vertex_count', 'nr', 'elapsed_ms']

    def validate(self, data):
        if data["p"] != Fraction(data["s"], data["t"]):
            raise serializers.ValidationError({"p": "p must equal s/t."})
        if data["p"] > Fraction(1, 2):
            raise serializers.ValidationError({"p": "p must not exceed 1/2."})
        data["p"] = format_rational(data["p"])
        return data
